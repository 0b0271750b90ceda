#include "corrlab/quantum.hpp"

#include <cmath>

namespace corrlab {

namespace {

long product(const std::vector<int>& dims) {
  long n = 1;
  for (int d : dims) n *= d;
  return n;
}

long ipow(int base, int exp) {
  long n = 1;
  for (int i = 0; i < exp; ++i) n *= base;
  return n;
}

double real_with_residual_check(Complex value, const char* what) {
  if (std::abs(value.imag()) > kEpsQuantum)
    throw InputError(std::string(what) + ": imaginary residual above tolerance");
  return value.real();
}

}  // namespace

Scenario MeasurementSetup::scenario() const {
  const int parties = static_cast<int>(povms.size());
  std::vector<int> settings(parties);
  std::vector<std::vector<int>> outcomes(parties);
  for (int n = 0; n < parties; ++n) {
    settings[n] = static_cast<int>(povms[n].size());
    for (const Povm& p : povms[n]) outcomes[n].push_back(static_cast<int>(p.effects.size()));
  }
  return Scenario(settings, outcomes);
}

void check_density_operator(const DensityOperator& rho, double eps) {
  const long n = product(rho.dims);
  if (rho.dims.empty()) throw InputError("density operator: no subsystem dimensions");
  if (rho.matrix.rows != n || rho.matrix.cols != n)
    throw InputError("density operator: matrix size does not match dims");
  if (!is_hermitian(rho.matrix, kEpsHermitianScale))
    throw InputError("density operator: not Hermitian");
  if (std::abs(rho.matrix.trace() - Complex(1.0)) > eps)
    throw InputError("density operator: trace is not one");
  if (min_eigenvalue(rho.matrix) < -kEpsPsd)
    throw InputError("density operator: negative eigenvalue");
}

void check_povm(const Povm& povm, double eps) {
  if (povm.dim < 1) throw InputError("povm: bad dimension");
  if (povm.effects.empty()) throw InputError("povm: no effects");
  ComplexMatrix sum(povm.dim, povm.dim);
  for (const ComplexMatrix& e : povm.effects) {
    if (e.rows != povm.dim || e.cols != povm.dim)
      throw InputError("povm: effect size does not match dimension");
    if (!is_hermitian(e, kEpsHermitianScale)) throw InputError("povm: effect not Hermitian");
    if (min_eigenvalue(e) < -kEpsPsd) throw InputError("povm: effect not positive");
    sum += e;
  }
  if (max_abs_diff(sum, ComplexMatrix::identity(povm.dim)) > eps)
    throw InputError("povm: effects do not sum to the identity");
}

void check_setup(const MeasurementSetup& setup, double eps) {
  if (setup.dims.size() != setup.povms.size())
    throw InputError("setup: dims and povms disagree on party count");
  for (std::size_t n = 0; n < setup.povms.size(); ++n) {
    if (setup.povms[n].empty()) throw InputError("setup: party without settings");
    for (const Povm& p : setup.povms[n]) {
      if (p.dim != setup.dims[n]) throw InputError("setup: povm dimension mismatch");
      check_povm(p, eps);
    }
  }
}

Behavior<double> born_behavior(const DensityOperator& rho, const MeasurementSetup& setup) {
  check_setup(setup);
  if (rho.dims != setup.dims) throw InputError("born_behavior: state and setup dims differ");
  check_density_operator(rho);
  const Scenario scn = setup.scenario();
  Behavior<double> b(scn);
  const long tuples = scn.setting_tuple_count();
  for (long ti = 0; ti < tuples; ++ti) {
    const auto tuple = scn.setting_tuple(ti);
    Tensor<double>& table = b.tables[ti];
    for (std::size_t f = 0; f < table.data.size(); ++f) {
      const auto idx = table.multi_index(f);
      std::vector<ComplexMatrix> factors;
      factors.reserve(scn.parties);
      for (int n = 0; n < scn.parties; ++n)
        factors.push_back(setup.povms[n][tuple[n]].effects[idx[n]]);
      table.data[f] =
          real_with_residual_check(trace_product(rho.matrix, tensor_all(factors)), "born");
    }
  }
  return b;
}

DensityOperator separable_state(const std::vector<double>& weights,
                                const std::vector<DensityOperator>& factors1,
                                const std::vector<DensityOperator>& factors2) {
  if (weights.empty() || weights.size() != factors1.size() || weights.size() != factors2.size())
    throw InputError("separable_state: weight/factor count mismatch");
  double total = 0.0;
  for (double w : weights) {
    if (w < -kEpsQuantum) throw InputError("separable_state: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > kEpsQuantum)
    throw InputError("separable_state: weights do not sum to one");
  const int d1 = static_cast<int>(product(factors1.front().dims));
  const int d2 = static_cast<int>(product(factors2.front().dims));
  ComplexMatrix acc(d1 * d2, d1 * d2);
  for (std::size_t m = 0; m < weights.size(); ++m) {
    check_density_operator(factors1[m]);
    check_density_operator(factors2[m]);
    if (product(factors1[m].dims) != d1 || product(factors2[m].dims) != d2)
      throw InputError("separable_state: factor dimensions disagree");
    acc += Complex(weights[m]) * tensor(factors1[m].matrix, factors2[m].matrix);
  }
  return {{d1, d2}, std::move(acc)};
}

LhvModel<double> classical_lhv_model(const std::vector<double>& weights,
                                     const std::vector<DensityOperator>& factors1,
                                     const std::vector<DensityOperator>& factors2,
                                     const MeasurementSetup& setup) {
  if (weights.size() != factors1.size() || weights.size() != factors2.size())
    throw InputError("classical_lhv_model: weight/factor count mismatch");
  check_setup(setup);
  if (setup.dims.size() != 2) throw InputError("classical_lhv_model: bipartite setups only");
  const Scenario scn = setup.scenario();
  LhvModel<double> model;
  model.weights = weights;
  for (std::size_t m = 0; m < weights.size(); ++m)
    model.omega.push_back("m" + std::to_string(m));
  model.responses.resize(2);
  for (int n = 0; n < 2; ++n) {
    const auto& factors = n == 0 ? factors1 : factors2;
    model.responses[n].resize(scn.settings[n]);
    for (int s = 0; s < scn.settings[n]; ++s) {
      const Povm& povm = setup.povms[n][s];
      model.responses[n][s].resize(weights.size());
      for (std::size_t m = 0; m < weights.size(); ++m) {
        std::vector<double> dist(povm.effects.size());
        for (std::size_t k = 0; k < povm.effects.size(); ++k)
          dist[k] = real_with_residual_check(
              trace_product(factors[m].matrix, povm.effects[k]), "classical model");
        model.responses[n][s][m] = std::move(dist);
      }
    }
  }
  return model;
}

JointMeasure<double> separable_joint_measure(const std::vector<double>& weights,
                                             const std::vector<DensityOperator>& factors1,
                                             const std::vector<DensityOperator>& factors2,
                                             const MeasurementSetup& setup) {
  if (setup.dims.size() != 2) throw InputError("separable_joint_measure: bipartite only");
  // The per-term Born distributions are exactly the classical model responses.
  const LhvModel<double> model = classical_lhv_model(weights, factors1, factors2, setup);
  const Scenario scn = setup.scenario();
  const auto grid_dims = pair_outcome_dims(scn);
  JointMeasure<double> mu{scn, Tensor<double>(grid_dims)};
  std::vector<int> g(grid_dims.size(), 0);
  do {
    double total = 0.0;
    for (std::size_t m = 0; m < weights.size(); ++m) {
      double term = weights[m];
      for (int n = 0; n < 2 && term != 0.0; ++n)
        for (int s = 0; s < scn.settings[n]; ++s)
          term *= model.responses[n][s][m][g[pair_axis(scn, n, s)]];
      total += term;
    }
    mu.tensor.at(g) = total;
  } while (next_tuple(g, grid_dims));
  return mu;
}

namespace {

void check_orthonormal_basis(const std::vector<std::vector<Complex>>& basis) {
  if (basis.empty()) throw InputError("basis: empty");
  const std::size_t d = basis.front().size();
  for (const auto& v : basis)
    if (v.size() != d) throw InputError("basis: vectors of unequal length");
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      Complex dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += std::conj(basis[i][k]) * basis[j][k];
      const Complex expected = i == j ? Complex(1.0) : Complex(0.0);
      if (std::abs(dot - expected) > kEpsQuantum)
        throw InputError("basis: vectors are not orthonormal");
    }
}

}  // namespace

DensityOperator basis_correlated_state(const std::vector<double>& weights,
                                       const std::vector<std::vector<Complex>>& basis) {
  check_orthonormal_basis(basis);
  if (weights.size() > basis.size())
    throw InputError("basis_correlated_state: more weights than basis vectors");
  const int d = static_cast<int>(basis.front().size());
  ComplexMatrix acc(d * d, d * d);
  for (std::size_t m = 0; m < weights.size(); ++m) {
    ComplexMatrix proj(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) proj.at(i, j) = basis[m][i] * std::conj(basis[m][j]);
    acc += Complex(weights[m]) * tensor(proj, proj);
  }
  DensityOperator rho{{d, d}, std::move(acc)};
  check_density_operator(rho);
  return rho;
}

JointMeasure<double> basis_correlated_joint_measure(
    const std::vector<double>& weights, const std::vector<std::vector<Complex>>& basis,
    const MeasurementSetup& setup) {
  check_orthonormal_basis(basis);
  check_setup(setup);
  if (setup.dims.size() != 2 || setup.dims[0] != setup.dims[1] ||
      setup.dims[0] != static_cast<int>(basis.front().size()))
    throw InputError("basis_correlated_joint_measure: dimension mismatch");
  const int d = setup.dims[0];
  const Scenario scn = setup.scenario();
  const auto grid_dims = pair_outcome_dims(scn);

  // <e_m| M |e_l> for every effect, reused across grid entries.
  const std::size_t terms = weights.size();
  std::vector<std::vector<std::vector<std::vector<Complex>>>> elements(2);
  for (int n = 0; n < 2; ++n) {
    elements[n].resize(scn.settings[n]);
    for (int s = 0; s < scn.settings[n]; ++s) {
      const Povm& povm = setup.povms[n][s];
      elements[n][s].resize(povm.effects.size(),
                            std::vector<Complex>(terms * terms, Complex(0.0)));
      for (std::size_t k = 0; k < povm.effects.size(); ++k)
        for (std::size_t m = 0; m < terms; ++m)
          for (std::size_t l = 0; l < terms; ++l) {
            Complex v = 0.0;
            for (int i = 0; i < d; ++i)
              for (int j = 0; j < d; ++j)
                v += std::conj(basis[m][i]) * povm.effects[k].at(i, j) * basis[l][j];
            elements[n][s][k][m * terms + l] = v;
          }
    }
  }

  JointMeasure<double> mu{scn, Tensor<double>(grid_dims)};
  std::vector<int> g(grid_dims.size(), 0);
  do {
    Complex total = 0.0;
    for (std::size_t m = 0; m < terms; ++m)
      for (std::size_t l = 0; l < terms; ++l) {
        Complex term = std::sqrt(weights[m]) * std::sqrt(weights[l]);
        for (int n = 0; n < 2; ++n)
          for (int s = 0; s < scn.settings[n]; ++s)
            term *= elements[n][s][g[pair_axis(scn, n, s)]][m * terms + l];
        total += term;
      }
    mu.tensor.at(g) = real_with_residual_check(total, "dilation measure");
  } while (next_tuple(g, grid_dims));
  return mu;
}

DensityOperator noisy_state(const DensityOperator& rho, double gamma) {
  if (rho.dims.size() != 2) throw InputError("noisy_state: bipartite states only");
  if (gamma < 0.0 || gamma > 1.0) throw InputError("noisy_state: gamma outside [0,1]");
  const int n = rho.matrix.rows;
  ComplexMatrix out = ComplexMatrix::identity(n);
  out *= Complex((1.0 - gamma) / n);
  ComplexMatrix scaled = rho.matrix;
  scaled *= Complex(gamma);
  out += scaled;
  return {rho.dims, std::move(out)};
}

double visibility_threshold(const DensityOperator& rho, int s1, int s2) {
  if (rho.dims.size() != 2) throw InputError("visibility_threshold: bipartite states only");
  if (s1 < 1 || s2 < 1) throw InputError("visibility_threshold: setting counts must be >= 1");
  const double tau1 = operator_norm(partial_trace(rho.matrix, rho.dims, {1}));
  const double tau2 = operator_norm(partial_trace(rho.matrix, rho.dims, {0}));
  const double beta =
      std::min(rho.dims[0] * (s2 - 1) * tau1, rho.dims[1] * (s1 - 1) * tau2);
  return 1.0 / (1.0 + beta);
}

DensityOperator isotropic_state(int d, double gamma) {
  if (d < 2) throw InputError("isotropic_state: d must be >= 2");
  if (gamma < 0.0 || gamma > 1.0) throw InputError("isotropic_state: gamma outside [0,1]");
  ComplexMatrix psi(d * d, d * d);
  for (int m = 0; m < d; ++m)
    for (int l = 0; l < d; ++l) psi.at(m * d + m, l * d + l) = 1.0 / d;
  ComplexMatrix out = ComplexMatrix::identity(d * d);
  out *= Complex((1.0 - gamma) / (d * d));
  psi *= Complex(gamma);
  out += psi;
  return {{d, d}, std::move(out)};
}

std::vector<int> SourceOperator::slot_dims() const {
  std::vector<int> dims;
  if (direction == SourceDirection::Right) {
    dims.push_back(d1);
    for (int i = 0; i < copies; ++i) dims.push_back(d2);
  } else {
    for (int i = 0; i < copies; ++i) dims.push_back(d1);
    dims.push_back(d2);
  }
  return dims;
}

namespace {

// rho acting on (the d1 slot, copy slot p) with identity on the other copies;
// summing these over p realizes the symmetrized block placement.
ComplexMatrix embed_right(const ComplexMatrix& rho, int d1, int d2, int copies, int p) {
  const long dim = d1 * ipow(d2, copies);
  ComplexMatrix out(static_cast<int>(dim), static_cast<int>(dim));
  std::vector<int> dims(1 + copies, d2);
  dims[0] = d1;
  std::vector<long> stride(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * dims[i + 1];
  for (long r = 0; r < dim; ++r) {
    const int a = static_cast<int>(r / stride[0]);
    const int kp = static_cast<int>((r / stride[p]) % d2);
    for (long c = 0; c < dim; ++c) {
      const int b = static_cast<int>(c / stride[0]);
      const int lp = static_cast<int>((c / stride[p]) % d2);
      // All slots other than 0 and p must match.
      const long r_rest = r - a * stride[0] - kp * stride[p];
      const long c_rest = c - b * stride[0] - lp * stride[p];
      if (r_rest != c_rest) continue;
      out.at(static_cast<int>(r), static_cast<int>(c)) = rho.at(a * d2 + kp, b * d2 + lp);
    }
  }
  return out;
}

ComplexMatrix embed_left(const ComplexMatrix& rho, int d1, int d2, int copies, int p) {
  const long dim = ipow(d1, copies) * d2;
  ComplexMatrix out(static_cast<int>(dim), static_cast<int>(dim));
  std::vector<int> dims(copies + 1, d1);
  dims[copies] = d2;
  std::vector<long> stride(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * dims[i + 1];
  const int last = copies;
  for (long r = 0; r < dim; ++r) {
    const int a = static_cast<int>(r % d2);
    const int kp = static_cast<int>((r / stride[p]) % d1);
    for (long c = 0; c < dim; ++c) {
      const int b = static_cast<int>(c % d2);
      const int lp = static_cast<int>((c / stride[p]) % d1);
      const long r_rest = r - a * stride[last] - kp * stride[p];
      const long c_rest = c - b * stride[last] - lp * stride[p];
      if (r_rest != c_rest) continue;
      out.at(static_cast<int>(r), static_cast<int>(c)) = rho.at(kp * d2 + a, lp * d2 + b);
    }
  }
  return out;
}

}  // namespace

SourceOperator source_operator(const DensityOperator& rho, double gamma,
                               SourceDirection direction, int copies, long dimension_cap) {
  if (rho.dims.size() != 2) throw InputError("source_operator: bipartite states only");
  if (gamma < 0.0 || gamma > 1.0) throw InputError("source_operator: gamma outside [0,1]");
  if (copies < 1) throw InputError("source_operator: copies must be >= 1");
  check_density_operator(rho);
  const int d1 = rho.dims[0], d2 = rho.dims[1];
  const int copy_dim = direction == SourceDirection::Right ? d2 : d1;
  const int fixed_dim = direction == SourceDirection::Right ? d1 : d2;
  long dim = fixed_dim;
  for (int i = 0; i < copies; ++i) {
    if (dim > dimension_cap / copy_dim)
      throw ResourceError("source operator dimension above cap " +
                          std::to_string(dimension_cap));
    dim *= copy_dim;
  }

  ComplexMatrix total(static_cast<int>(dim), static_cast<int>(dim));
  // Uniform background.
  for (long i = 0; i < dim; ++i)
    total.at(static_cast<int>(i), static_cast<int>(i)) = (1.0 - gamma) / dim;

  // Symmetrized block placement: the state acting on each copy slot in turn,
  // scaled by 1 / copy_dim^(copies-1).
  const double block_scale = gamma / static_cast<double>(ipow(copy_dim, copies - 1));
  for (int p = 0; p < copies; ++p) {
    ComplexMatrix placed = direction == SourceDirection::Right
                               ? embed_right(rho.matrix, d1, d2, copies, p + 1)
                               : embed_left(rho.matrix, d1, d2, copies, p);
    placed *= Complex(block_scale);
    total += placed;
  }

  // Reduced-state correction.
  const ComplexMatrix tau = direction == SourceDirection::Right
                                ? partial_trace(rho.matrix, rho.dims, {1})
                                : partial_trace(rho.matrix, rho.dims, {0});
  if (copies > 1) {
    const double correction = -gamma * (copies - 1) / static_cast<double>(ipow(copy_dim, copies));
    const long rest = dim / fixed_dim;
    ComplexMatrix corr = direction == SourceDirection::Right
                             ? tensor(tau, ComplexMatrix::identity(static_cast<int>(rest)))
                             : tensor(ComplexMatrix::identity(static_cast<int>(rest)), tau);
    corr *= Complex(correction);
    total += corr;
  }
  return {direction, d1, d2, copies, std::move(total)};
}

double source_positivity_bound(const DensityOperator& rho, int s1, int s2,
                               SourceDirection direction) {
  if (rho.dims.size() != 2) throw InputError("source_positivity_bound: bipartite states only");
  if (s1 < 1 || s2 < 1) throw InputError("source_positivity_bound: setting counts must be >= 1");
  if (direction == SourceDirection::Right) {
    const double tau1 = operator_norm(partial_trace(rho.matrix, rho.dims, {1}));
    return 1.0 / (1.0 + rho.dims[0] * (s2 - 1) * tau1);
  }
  const double tau2 = operator_norm(partial_trace(rho.matrix, rho.dims, {0}));
  return 1.0 / (1.0 + rho.dims[1] * (s1 - 1) * tau2);
}

SourceVerification verify_source_operator(const SourceOperator& source,
                                          const DensityOperator& target, double trace_eps,
                                          double psd_eps) {
  SourceVerification v;
  const ComplexMatrix& t = source.matrix;
  const auto dims = source.slot_dims();

  const double herm_tol = kEpsHermitianScale * std::max(1.0, t.max_abs());
  double herm_residual = 0.0;
  for (int i = 0; i < t.rows; ++i)
    for (int j = i; j < t.cols; ++j)
      herm_residual = std::max(herm_residual, std::abs(t.at(i, j) - std::conj(t.at(j, i))));
  v.checks.push_back({"hermitian", herm_residual, herm_tol, herm_residual <= herm_tol});

  const double trace_residual = std::abs(t.trace() - Complex(1.0));
  v.checks.push_back({"unit-trace", trace_residual, trace_eps, trace_residual <= trace_eps});

  // Every (copies-1)-subset of copy slots must trace down to the target.
  const int copy_offset = source.direction == SourceDirection::Right ? 1 : 0;
  for (int keep = 0; keep < source.copies; ++keep) {
    std::vector<int> traced;
    for (int p = 0; p < source.copies; ++p)
      if (p != keep) traced.push_back(copy_offset + p);
    const ComplexMatrix reduced = traced.empty() ? t : partial_trace(t, dims, traced);
    const double residual = max_abs_diff(reduced, target.matrix);
    v.checks.push_back({"partial-trace-keep-" + std::to_string(keep + 1), residual, trace_eps,
                        residual <= trace_eps});
  }

  v.min_eigenvalue = min_eigenvalue(t);
  v.checks.push_back(
      {"min-eigenvalue", -std::min(v.min_eigenvalue, 0.0), psd_eps, v.min_eigenvalue >= -psd_eps});

  for (const auto& c : v.checks) v.pass = v.pass && c.pass;
  return v;
}

std::vector<DirectionalMeasure<double>> source_directional_measures(
    const SourceOperator& source, const MeasurementSetup& setup) {
  check_setup(setup);
  if (setup.dims.size() != 2) throw InputError("source measures: bipartite setups only");
  if (setup.dims[0] != source.d1 || setup.dims[1] != source.d2)
    throw InputError("source measures: setup dims do not match the source operator");
  const Scenario scn = setup.scenario();
  const bool right = source.direction == SourceDirection::Right;
  const int indexed_party = right ? 0 : 1;
  const int other = 1 - indexed_party;
  if (scn.settings[other] != source.copies)
    throw InputError("source measures: copy count does not match the other party's settings");

  std::vector<DirectionalMeasure<double>> out;
  for (int s = 0; s < scn.settings[indexed_party]; ++s) {
    // Kept axes in setting_pairs order: the indexed party's chosen setting
    // together with every setting of the other party.
    std::vector<int> tensor_dims;
    if (right) {
      tensor_dims.push_back(scn.outcomes[0][s]);
      for (int t = 0; t < scn.settings[1]; ++t) tensor_dims.push_back(scn.outcomes[1][t]);
    } else {
      for (int t = 0; t < scn.settings[0]; ++t) tensor_dims.push_back(scn.outcomes[0][t]);
      tensor_dims.push_back(scn.outcomes[1][s]);
    }
    Tensor<double> tensor_out(tensor_dims);
    std::vector<int> g(tensor_dims.size(), 0);
    do {
      std::vector<ComplexMatrix> factors;
      if (right) {
        factors.push_back(setup.povms[0][s].effects[g[0]]);
        for (int t = 0; t < scn.settings[1]; ++t)
          factors.push_back(setup.povms[1][t].effects[g[1 + t]]);
      } else {
        for (int t = 0; t < scn.settings[0]; ++t)
          factors.push_back(setup.povms[0][t].effects[g[t]]);
        factors.push_back(setup.povms[1][s].effects[g[scn.settings[0]]]);
      }
      tensor_out.at(g) = real_with_residual_check(
          trace_product(source.matrix, tensor_all(factors)), "source measure");
    } while (next_tuple(g, tensor_dims));
    out.push_back({indexed_party, s, std::move(tensor_out)});
  }
  return out;
}

Povm qubit_projective_povm(double ax, double ay, double az) {
  const double norm = std::sqrt(ax * ax + ay * ay + az * az);
  if (norm == 0.0) throw InputError("qubit povm: zero direction");
  ax /= norm;
  ay /= norm;
  az /= norm;
  Povm povm;
  povm.dim = 2;
  for (int sign : {1, -1}) {
    ComplexMatrix e(2, 2);
    e.at(0, 0) = 0.5 * (1.0 + sign * az);
    e.at(1, 1) = 0.5 * (1.0 - sign * az);
    e.at(0, 1) = 0.5 * sign * Complex(ax, -ay);
    e.at(1, 0) = 0.5 * sign * Complex(ax, ay);
    povm.effects.push_back(std::move(e));
  }
  return povm;
}

}  // namespace corrlab
