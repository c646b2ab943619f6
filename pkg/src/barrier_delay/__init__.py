"""Over-barrier scattering and group delays for an asymmetric rectangular barrier."""

from .delays import (
    DelayReport,
    ResonanceSummary,
    classical_time,
    delay_report,
    half_width,
    min_packet_width,
    packet_validity_bound,
    resonance_summary,
    tau_1_analytic,
    tau_numeric,
    tau_r,
    tau_t_analytic,
)
from .errors import (
    ConstructionError,
    DomainError,
    NoPeakError,
    PhaseWrapError,
    UndefinedError,
    WrapAmbiguityError,
)
from .scan import ScanRequest, ScanResult, scan_energy, scan_thickness, unwrap_phase
from .scattering import (
    BarrierConfig,
    ScatteringAmplitudes,
    WaveNumbers,
    amplitudes,
    complex_g1,
    complex_g2,
    transmission_probability,
    wave_numbers,
)
from .wavepacket import PacketMeasurement, PacketSpec, distortion_metric, synthesize

__version__ = "0.1.0"
