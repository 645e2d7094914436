"""Classical and quantum dynamics of a two-level atom in a phase-modulated
standing light wave: dressed-surface Hamiltonians, surface-crossing loci,
stroboscopic classical dynamics, first-order resonance theory, and
split-operator spinor evolution."""

from .params import (DEFAULT_HBAR_EFF, DimensionlessParams, PhysicalParams,
                     to_dimensionless)
from .hamiltonians import (CouplingMatrix, DressedFrame, HamiltonianVariant,
                           coupling_matrix, diagonalize, dressed_frame, force,
                           potential, scaled_coupling)
from .pes import (CrossingPoint, CrossingRegime, GapField,
                  crossing_exact, crossing_large_detuning, crossing_residual,
                  crossing_small_detuning, gap_scan)
from .classical import (PhaseState, SectionDataset, Trajectory,
                        detect_island_period, disk_ensemble, ensemble_sections,
                        integrate, refine_periodic_point, rotation_number,
                        step, strobe_jacobian, strobe_map)
from .bessel import bessel_jn, bessel_jn_prime
from .perturbation import (ActionAngleState, PerturbationParams,
                           ResonanceRecord, TransformResult,
                           action_angle_to_xp, averaged_hamiltonian,
                           delta_S_nm, find_resonances, first_order_frequency,
                           first_order_transform, perturbing_hamiltonian,
                           resonance_strength, xp_to_action_angle)
from .quantum import (LocalizationFit, MatrixRot, ObservableSeries,
                      ScalarVariant, SpatialGrid, SpinorField,
                      energy_expectation, evolve, init_gaussian,
                      localization_length, momentum_distribution, split_step)
from .chains import ChainPoint, find_island_chain, scan_island_chains

__version__ = "0.1.0"
