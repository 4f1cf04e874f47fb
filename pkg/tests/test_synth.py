"""Synthesis script emission and report extraction tests."""

import pytest

from polymulgen.errors import BadParams
from polymulgen.synth import SynthParams, emit_synth_script, parse_report, script_name


def _params(tool, **kw):
    base = dict(
        tool=tool,
        clock_ns=2.0,
        top_name="mul_sbm_192",
        source_files=("vlog/mul_sbm_192.v",),
        report_dir="reports",
    )
    base.update(kw)
    return SynthParams(**base)


def test_genus_script_contents():
    text = emit_synth_script(_params("genus"))
    assert "read_hdl -language v2001 {vlog/mul_sbm_192.v}" in text
    assert "elaborate mul_sbm_192" in text
    assert "create_clock -name clk -period 2.0 [get_ports clk]" in text
    assert "syn_generic" in text
    assert "syn_map" in text
    assert "report_timing" in text
    assert "report_area" in text
    assert "report_power" in text


def test_dc_script_contents():
    text = emit_synth_script(_params("dc"))
    assert "analyze -format verilog {vlog/mul_sbm_192.v}" in text
    assert "elaborate mul_sbm_192" in text
    assert "create_clock -name clk -period 2.0 [get_ports clk]" in text
    assert "compile" in text
    assert "report_timing" in text
    assert "report_area" in text
    assert "report_power" in text


def test_lib_placeholder_when_unset():
    for tool in ("genus", "dc"):
        text = emit_synth_script(_params(tool))
        assert "$env(TECH_LIB)" in text


def test_lib_path_injected():
    text = emit_synth_script(_params("genus", lib_path="/libs/sc65.lib"))
    assert "/libs/sc65.lib" in text
    assert "$env(TECH_LIB)" not in text


def test_script_names():
    assert script_name(_params("genus")) == "mul_sbm_192_genus.tcl"
    assert script_name(_params("dc")) == "mul_sbm_192_dc.tcl"


def test_emission_is_deterministic():
    assert emit_synth_script(_params("genus")) == emit_synth_script(_params("genus"))


def test_both_tools_share_sources_and_clock():
    g = emit_synth_script(_params("genus"))
    d = emit_synth_script(_params("dc"))
    assert "{vlog/mul_sbm_192.v}" in g and "{vlog/mul_sbm_192.v}" in d
    assert "-period 2.0" in g and "-period 2.0" in d


def test_param_validation():
    with pytest.raises(BadParams):
        _params("vivado")
    with pytest.raises(BadParams):
        _params("genus", clock_ns=-1)
    with pytest.raises(BadParams):
        _params("genus", clock_ns=0)
    with pytest.raises(BadParams):
        _params("genus", top_name="")


def test_parse_report_genus_style():
    rpt = "\n".join(
        [
            "============",
            "  Total cell area: 32,011.2",
            "  Total Power =   13.8 mW",
            "  frequency 500.0 MHz",
        ]
    )
    got = parse_report(rpt)
    assert got["area_um2"] == pytest.approx(32011.2)
    assert got["power_mw"] == pytest.approx(13.8)
    assert got["freq_mhz"] == pytest.approx(500.0)


def test_parse_report_period_form_and_units():
    rpt = "clock period: 2.0 ns\nTotal Power 0.0138 W\nTotal area 32011.2"
    got = parse_report(rpt)
    assert got["freq_mhz"] == pytest.approx(500.0)
    assert got["power_mw"] == pytest.approx(13.8)
    assert got["area_um2"] == pytest.approx(32011.2)


def test_parse_report_missing_values_are_none():
    got = parse_report("nothing to see here\n")
    assert got == {"area_um2": None, "power_mw": None, "freq_mhz": None}
