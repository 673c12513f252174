"""Multi-cell downlink simulator for human EMF exposure.

Quantifies power density and specific absorption rate in three cellular
deployment generations and implements an exposure-threshold-constrained
base-station selection protocol next to the usual max-RSS baseline.
"""

from .antenna import PatternParams, attenuation, gain, pattern_params
from .channel import LinkSample, noise_floor, path_loss, rss, shannon_rate, snr
from .exposure import (FreeSpaceParams, SarEstimate, TissueParams, pd_from_field,
                       pd_from_link, sar_boundary, sar_point, sector_average_sar)
from .layout import (LinkGeometry, SectorGeometry, UeDrop, build_layout,
                     link_geometry, sample_positions, sample_ue, write_layout_csv)
from .profiles import (ExposureLimits, Generation, PathLossModel, SystemProfile,
                       apply_overrides, builtin_profile, effective_tx_power,
                       load_profile)
from .protocol import (AttachmentOutcome, CandidateReport, Phase, ProtocolState,
                       select_baseline, select_constrained, step_state_machine)
from .simulation import (EmpiricalDistribution, RunConfig, RunResult, SweepResult,
                         distance_sweep, run_drops)

__version__ = "0.1.0"
