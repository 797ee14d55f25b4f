"""Link-level simulation and error-probability analysis of RIS-aided double
spatial scattering modulation (RIS-DSSM) over sparse mmWave channels."""
from .config import ConfigError, ModulationKind, SystemConfig, load_config, make_config, parse_config, spectral_efficiency, validate
from .modem import Constellation, Mapper, TxTriple, build_constellation
from .channel import ChannelRealization, draw_realization
from .detectors import DetectionResult, DetectorKind, complexity_counts, detect_optimal, detect_suboptimal
from .montecarlo import AbepCurve, AbepPoint, SystemKind, run_abep, run_detector_comparison

__version__ = "0.1.0"
