#pragma once

#include <string>
#include <vector>

#include "corrlab/complex_matrix.hpp"
#include "corrlab/lhv.hpp"
#include "corrlab/scenario.hpp"

namespace corrlab {

// Tolerances of the quantum layer.
constexpr double kEpsHermitianScale = 1e-12;  // relative Hermiticity residual
constexpr double kEpsPsd = 1e-10;             // allowed negative eigenvalue
constexpr double kEpsQuantum = 1e-9;          // generic float comparisons
constexpr long kSourceDimensionCap = 1 << 14;

/// Quantum state of an N-partite system with the listed subsystem dimensions.
struct DensityOperator {
  std::vector<int> dims;
  ComplexMatrix matrix;
};

/// Finite-outcome positive operator-valued measure on one subsystem.
struct Povm {
  int dim = 0;
  std::vector<ComplexMatrix> effects;
};

/// One POVM per (party, setting).
struct MeasurementSetup {
  std::vector<int> dims;                  // one dimension per party
  std::vector<std::vector<Povm>> povms;   // [party][setting]

  Scenario scenario() const;
};

void check_density_operator(const DensityOperator& rho, double eps = kEpsQuantum);
void check_povm(const Povm& povm, double eps = kEpsQuantum);
void check_setup(const MeasurementSetup& setup, double eps = kEpsQuantum);

/// Born-rule behavior of a state under a measurement setup (float mode).
Behavior<double> born_behavior(const DensityOperator& rho, const MeasurementSetup& setup);

/// Convex mixture of bipartite product states.
DensityOperator separable_state(const std::vector<double>& weights,
                                const std::vector<DensityOperator>& factors1,
                                const std::vector<DensityOperator>& factors2);

/// Classical-type hidden-variable model of a separable state: omega indexes
/// the mixture terms, responses are per-factor Born distributions.
LhvModel<double> classical_lhv_model(const std::vector<double>& weights,
                                     const std::vector<DensityOperator>& factors1,
                                     const std::vector<DensityOperator>& factors2,
                                     const MeasurementSetup& setup);

/// Joint measure over all (party, setting) outcomes whose marginals are the
/// Born tables of the separable state.
JointMeasure<double> separable_joint_measure(const std::vector<double>& weights,
                                             const std::vector<DensityOperator>& factors1,
                                             const std::vector<DensityOperator>& factors2,
                                             const MeasurementSetup& setup);

/// Mixture of aligned basis projectors |e><e| (x) |e><e|.
DensityOperator basis_correlated_state(const std::vector<double>& weights,
                                       const std::vector<std::vector<Complex>>& basis);

/// Joint measure of the basis-correlated state derived from its pure dilation
/// onto S1 + S2 basis copies; generally different from the separable-state
/// measure for the same behavior.
JointMeasure<double> basis_correlated_joint_measure(const std::vector<double>& weights,
                                                    const std::vector<std::vector<Complex>>& basis,
                                                    const MeasurementSetup& setup);

/// (1 - gamma) I / (d1 d2) + gamma rho.
DensityOperator noisy_state(const DensityOperator& rho, double gamma);

/// Largest noise weight with a guaranteed S1 x S2-setting hidden-variable
/// description: 1 / (1 + min{d1 (S2-1) ||tr_2 rho||, d2 (S1-1) ||tr_1 rho||}).
double visibility_threshold(const DensityOperator& rho, int s1, int s2);

/// (1 - gamma) I / d^2 + gamma |psi><psi| with psi maximally entangled.
DensityOperator isotropic_state(int d, double gamma);

enum class SourceDirection { Right, Left };

/// Self-adjoint dilation onto copy slots of one party whose prescribed
/// partial traces all return the target noisy state.
struct SourceOperator {
  SourceDirection direction = SourceDirection::Right;
  int d1 = 0;
  int d2 = 0;
  int copies = 0;
  ComplexMatrix matrix;

  std::vector<int> slot_dims() const;
};

SourceOperator source_operator(const DensityOperator& rho, double gamma,
                               SourceDirection direction, int copies,
                               long dimension_cap = kSourceDimensionCap);

/// Positivity threshold of the dilation in one direction; the larger of the
/// two directions equals visibility_threshold.
double source_positivity_bound(const DensityOperator& rho, int s1, int s2,
                               SourceDirection direction);

struct SourceCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SourceVerification {
  std::vector<SourceCheck> checks;
  double min_eigenvalue = 0.0;
  bool pass = true;
};

/// Checks Hermiticity, unit trace, every prescribed partial trace against the
/// target state, and the smallest eigenvalue.
SourceVerification verify_source_operator(const SourceOperator& source,
                                          const DensityOperator& target,
                                          double trace_eps = 1e-10,
                                          double psd_eps = kEpsPsd);

/// Born measures of a source operator against one party's setting and every
/// setting of the other party at once; inputs to the compatibility assembly.
std::vector<DirectionalMeasure<double>> source_directional_measures(
    const SourceOperator& source, const MeasurementSetup& setup);

/// Rank-1 projective qubit POVM along the Bloch vector (ax, ay, az).
Povm qubit_projective_povm(double ax, double ay, double az);

}  // namespace corrlab
