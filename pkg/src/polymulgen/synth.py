"""Synthesis script emission for Cadence Genus and Synopsys DC.

Scripts are generated, never executed: both tools are proprietary and the
user is expected to run them in their own environment.  A tolerant report
extractor is provided for pulling area/power/frequency numbers back out of
tool report files, feeding the analysis module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import BadParams

SUPPORTED_TOOLS = ("genus", "dc")

# Used when no library path is configured; the script stays runnable once
# the user exports TECH_LIB in the tool shell.
_LIB_PLACEHOLDER = "$env(TECH_LIB)"


@dataclass(frozen=True)
class SynthParams:
    """Parameters for one synthesis script."""

    tool: str
    clock_ns: float
    top_name: str
    source_files: tuple = ()
    report_dir: str = "reports"
    lib_path: str = ""

    def __post_init__(self):
        if self.tool not in SUPPORTED_TOOLS:
            raise BadParams(f"unknown synthesis tool {self.tool!r}, expected one of {SUPPORTED_TOOLS}")
        if not (self.clock_ns > 0):
            raise BadParams(f"clock_ns must be positive, got {self.clock_ns}")
        if not self.top_name:
            raise BadParams("top_name must be nonempty")
        object.__setattr__(self, "source_files", tuple(self.source_files))


def script_name(p: SynthParams) -> str:
    return f"{p.top_name}_{p.tool}.tcl"


def _tcl_list(items) -> str:
    return "{" + " ".join(items) + "}"


def _genus_script(p: SynthParams, lib: str) -> str:
    sources = _tcl_list(p.source_files) if p.source_files else f"{{{p.top_name}.v}}"
    lines = [
        f"# Genus synthesis script for {p.top_name}",
        f"# target clock period: {p.clock_ns} ns",
        "",
        f"set LIB {lib}",
        f"set RPT {p.report_dir}",
        "file mkdir $RPT",
        "",
        "# effort knobs: the defaults below are medium; raise for final runs",
        "# set_db syn_generic_effort high",
        "# set_db syn_map_effort high",
        "# set_db retime true",
        "",
        "read_libs $LIB",
        f"read_hdl -language v2001 {sources}",
        f"elaborate {p.top_name}",
        "",
        f"create_clock -name clk -period {p.clock_ns} [get_ports clk]",
        "",
        "syn_generic",
        "syn_map",
        "",
        f"report_timing > $RPT/{p.top_name}_timing.rpt",
        f"report_area > $RPT/{p.top_name}_area.rpt",
        f"report_power > $RPT/{p.top_name}_power.rpt",
        "",
        f"write_hdl > $RPT/{p.top_name}_netlist.v",
        "",
    ]
    return "\n".join(lines)


def _dc_script(p: SynthParams, lib: str) -> str:
    sources = _tcl_list(p.source_files) if p.source_files else f"{{{p.top_name}.v}}"
    lines = [
        f"# Design Compiler synthesis script for {p.top_name}",
        f"# target clock period: {p.clock_ns} ns",
        "",
        f"set LIB {lib}",
        f"set RPT {p.report_dir}",
        "file mkdir $RPT",
        "",
        "set target_library $LIB",
        "set link_library [concat * $LIB]",
        "",
        "# effort knobs: uncomment for final runs",
        "# set compile_effort high",
        "# set_optimize_registers true",
        "",
        f"analyze -format verilog {sources}",
        f"elaborate {p.top_name}",
        f"current_design {p.top_name}",
        "link",
        "",
        f"create_clock -name clk -period {p.clock_ns} [get_ports clk]",
        "",
        "compile",
        "",
        f"report_timing > $RPT/{p.top_name}_timing.rpt",
        f"report_area > $RPT/{p.top_name}_area.rpt",
        f"report_power > $RPT/{p.top_name}_power.rpt",
        "",
        f"write -format verilog -output $RPT/{p.top_name}_netlist.v",
        "",
    ]
    return "\n".join(lines)


def emit_synth_script(p: SynthParams) -> str:
    """Render the Tcl synthesis script for ``p``.  Deterministic text."""
    lib = p.lib_path if p.lib_path else _LIB_PLACEHOLDER
    if p.tool == "genus":
        return _genus_script(p, lib)
    return _dc_script(p, lib)


# --- report extraction ------------------------------------------------------
#
# Line-oriented and best effort: report formats differ across tool versions,
# so each value is matched independently and missing values stay None.

_AREA_PATTERNS = (
    re.compile(r"total\s+area[^\d]*([\d][\d,]*\.?\d*)", re.IGNORECASE),
    re.compile(r"total\s+cell\s+area[^\d]*([\d][\d,]*\.?\d*)", re.IGNORECASE),
    re.compile(r"^\s*area[:\s]+([\d][\d,]*\.?\d*)\s*$", re.IGNORECASE),
)
_POWER_PATTERNS = (
    re.compile(r"total\s+power[^\d]*([\d][\d,]*\.?\d*(?:[eE][-+]?\d+)?)\s*(mW|uW|W)?", re.IGNORECASE),
    re.compile(r"^\s*power[:\s]+([\d][\d,]*\.?\d*(?:[eE][-+]?\d+)?)\s*(mW|uW|W)?", re.IGNORECASE),
)
_FREQ_PATTERNS = (
    re.compile(r"freq(?:uency)?[^\d]*([\d][\d,]*\.?\d*)\s*MHz", re.IGNORECASE),
    re.compile(r"clock\s+period[^\d]*([\d][\d,]*\.?\d*)\s*ns", re.IGNORECASE),
)

_POWER_SCALE = {"w": 1000.0, "mw": 1.0, "uw": 0.001, None: 1.0, "": 1.0}


def _num(text: str) -> float:
    return float(text.replace(",", ""))


def parse_report(text: str) -> dict:
    """Pull area_um2 / power_mw / freq_mhz out of a tool report, best effort.

    Returns a dict with those three keys; values are floats or None when the
    report does not contain a recognizable figure.
    """
    area = power = freq = None
    for line in text.splitlines():
        if area is None:
            for pat in _AREA_PATTERNS:
                mt = pat.search(line)
                if mt:
                    area = _num(mt.group(1))
                    break
        if power is None:
            for pat in _POWER_PATTERNS:
                mt = pat.search(line)
                if mt:
                    unit = (mt.group(2) or "").lower()
                    power = _num(mt.group(1)) * _POWER_SCALE.get(unit, 1.0)
                    break
        if freq is None:
            for pat in _FREQ_PATTERNS:
                mt = pat.search(line)
                if mt:
                    val = _num(mt.group(1))
                    # second pattern yields a period in ns, convert
                    freq = val if "mhz" in pat.pattern.lower() else 1000.0 / val
                    break
    return {"area_um2": area, "power_mw": power, "freq_mhz": freq}
