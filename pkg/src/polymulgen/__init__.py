"""polymulgen: serial polynomial multiplier generator and analysis workbench.

Generates parameterized structural Verilog for schoolbook, 2-way Karatsuba,
3-way and 4-way Toom-Cook multipliers plus a digit-serial wrapper, together
with synthesis scripts, self-checking testbenches, cycle-accurate models,
and latency / figure-of-merit reports.
"""

from .analysis import (
    ReportRow,
    SweepReport,
    billed_cycles,
    emit_csv,
    fom_area,
    fom_power,
    latency_us,
    read_rows,
    sweep_report,
)
from .cli import BatchResult, JobResult, JobSpec, main, parse_config, run_batch, serialize_config
from .errors import (
    BadDigit,
    BadFrequency,
    BadInput,
    BadParams,
    CyclicHierarchy,
    InexactDivision,
    InternalInterpolationError,
    SchemaViolation,
    ToomRequiresInteger,
    UncheckedIR,
    UnresolvedInstance,
    XmlSyntax,
)
from .generators import (
    GenParams,
    design_library,
    gen_digit_serial,
    gen_karatsuba2,
    gen_sbm,
    gen_toom3,
    gen_toom4,
    generate,
    top_name,
)
from .interp import Simulator, compile_sim
from .ir import RtlModule, check, expr_width, flatten_hierarchy
from .models import (
    ArchKind,
    RunTrace,
    cycle_contract,
    run_digit_serial,
    run_karatsuba2,
    run_model,
    run_sbm,
    run_toom3,
    run_toom4,
)
from .numeric import ArithMode, oracle_mul
from .synth import SynthParams, emit_synth_script, parse_report, script_name
from .verilog import (
    TestbenchArtifact,
    VerilogArtifact,
    emit_testbench,
    emit_verilog,
    parse_skeleton,
    skeleton_of,
)

__version__ = "0.1.0"

__all__ = [
    "ArchKind",
    "ArithMode",
    "BadDigit",
    "BadFrequency",
    "BadInput",
    "BadParams",
    "BatchResult",
    "CyclicHierarchy",
    "GenParams",
    "InexactDivision",
    "InternalInterpolationError",
    "JobResult",
    "JobSpec",
    "ReportRow",
    "RtlModule",
    "RunTrace",
    "SchemaViolation",
    "Simulator",
    "SweepReport",
    "SynthParams",
    "TestbenchArtifact",
    "ToomRequiresInteger",
    "UncheckedIR",
    "UnresolvedInstance",
    "VerilogArtifact",
    "XmlSyntax",
    "billed_cycles",
    "check",
    "compile_sim",
    "cycle_contract",
    "design_library",
    "emit_csv",
    "emit_synth_script",
    "emit_testbench",
    "emit_verilog",
    "expr_width",
    "flatten_hierarchy",
    "fom_area",
    "fom_power",
    "gen_digit_serial",
    "gen_karatsuba2",
    "gen_sbm",
    "gen_toom3",
    "gen_toom4",
    "generate",
    "latency_us",
    "main",
    "oracle_mul",
    "parse_config",
    "parse_report",
    "parse_skeleton",
    "read_rows",
    "run_batch",
    "run_digit_serial",
    "run_karatsuba2",
    "run_model",
    "run_sbm",
    "run_toom3",
    "run_toom4",
    "script_name",
    "serialize_config",
    "skeleton_of",
    "sweep_report",
    "top_name",
]
