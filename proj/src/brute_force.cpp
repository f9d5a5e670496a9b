#include "magnon/brute_force.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace magnon {

namespace {

using Cplx = std::complex<double>;
using SparseC = Eigen::SparseMatrix<Cplx>;

SparseC pauli(char which) {
  SparseC p(2, 2);
  switch (which) {
    case 'x':
      p.insert(0, 1) = 1.0;
      p.insert(1, 0) = 1.0;
      break;
    case 'y':
      p.insert(0, 1) = Cplx(0, -1);
      p.insert(1, 0) = Cplx(0, 1);
      break;
    case 'z':
      // bit value 1 = spin up
      p.insert(0, 0) = -1.0;
      p.insert(1, 1) = 1.0;
      break;
    default:
      p.insert(0, 0) = 1.0;
      p.insert(1, 1) = 1.0;
  }
  p.makeCompressed();
  return p;
}

// sigma^which on `site` (1-based), identity elsewhere. Site 1 is the least
// significant factor, so it is the rightmost in the Kronecker product.
SparseC site_operator(char which, Index site, Index sites) {
  SparseC result(1, 1);
  result.insert(0, 0) = 1.0;
  for (Index s = sites; s >= 1; --s) {
    SparseC next = Eigen::kroneckerProduct(result, pauli(s == site ? which : 'i')).eval();
    result = std::move(next);
  }
  return result;
}

double one_norm(const SparseC& m) {
  double best = 0;
  for (Index k = 0; k < m.outerSize(); ++k) {
    double col = 0;
    for (SparseC::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

BruteForceChain::BruteForceChain(const ChainConfig<double>& cfg) : cfg_(cfg) {
  if (cfg_.sites < 2) throw ValidationError("brute force: N must be >= 2");
  if (cfg_.sites > max_sites) {
    throw ValidationError("brute force: N must be <= 12, got " + std::to_string(cfg_.sites));
  }
  const Index n = cfg_.sites;
  const Index dim = dimension();

  hamiltonian_.resize(dim, dim);
  for (Index site = 1; site < n; ++site) {
    for (char a : {'x', 'y', 'z'}) {
      SparseC bond = site_operator(a, site, n) * site_operator(a, site + 1, n);
      hamiltonian_ += Cplx(-cfg_.coupling / 2) * bond;
    }
  }
  SparseC sz_total(dim, dim);
  SparseC kick(dim, dim);
  const SparseC id = site_operator('i', 1, n);
  for (Index site = 1; site <= n; ++site) {
    const SparseC sz = site_operator('z', site, n);
    sz_total += sz;
    const double d = double(site - cfg_.field_center);
    kick += Cplx(d * d / 2) * (id + sz);
  }
  hamiltonian_ += Cplx(-cfg_.field) * sz_total;
  hamiltonian_.prune(Cplx(0));
  hamiltonian_.makeCompressed();

  kick_generator_.resize(dim);
  for (Index i = 0; i < dim; ++i) kick_generator_(i) = kick.coeff(i, i).real();
  norm_bound_ = one_norm(hamiltonian_);
}

ComplexVector<double> BruteForceChain::embed(const ExcitationState<double>& state) const {
  detail::require_same_size(state.sites(), sites(), "brute force embed");
  ComplexVector<double> full = ComplexVector<double>::Zero(dimension());
  for (Index m = 1; m <= sites(); ++m) full(basis_index(m)) = state(m);
  return full;
}

BruteForceResult BruteForceChain::project(const ComplexVector<double>& full) const {
  ComplexVector<double> sector(sites());
  for (Index m = 1; m <= sites(); ++m) sector(m - 1) = full(basis_index(m));
  double outside = 0;
  for (Index i = 0; i < dimension(); ++i) {
    const bool single_excitation = i != 0 && (i & (i - 1)) == 0;
    if (!single_excitation) outside += std::norm(full(i));
  }
  return {ExcitationState<double>::adopt(std::move(sector)), outside};
}

ComplexVector<double> BruteForceChain::evolve_full(const ComplexVector<double>& full,
                                                   double t) const {
  if (t == 0) return full;
  const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(t) * norm_bound_ / 0.5)));
  const double dt = t / substeps;
  ComplexVector<double> psi = full;
  ComplexVector<double> term(psi.size());
  for (int s = 0; s < substeps; ++s) {
    term = psi;
    ComplexVector<double> sum = psi;
    for (int order = 1; order <= 60; ++order) {
      term = (hamiltonian_ * term) * Cplx(0, -dt / order);
      sum += term;
      if (term.norm() < 1e-18) break;
    }
    psi = std::move(sum);
  }
  return psi;
}

ComplexVector<double> BruteForceChain::kick_full(const ComplexVector<double>& full,
                                                 double strength) const {
  ComplexVector<double> out(full.size());
  for (Index i = 0; i < full.size(); ++i) {
    out(i) = full(i) * std::polar(1.0, -(strength / 2) * kick_generator_(i));
  }
  return out;
}

BruteForceResult BruteForceChain::evolve(const ExcitationState<double>& initial, double t) const {
  return project(evolve_full(embed(initial), t));
}

BruteForceResult BruteForceChain::run_schedule(const ExcitationState<double>& initial,
                                               std::span<const double> kicks) const {
  ComplexVector<double> psi = embed(initial);
  for (double c : kicks) psi = evolve_full(kick_full(psi, c), cfg_.period);
  return project(psi);
}

BruteForceResult brute_force_evolve(const ChainConfig<double>& cfg, double t,
                                    const ExcitationState<double>& initial) {
  return BruteForceChain(cfg).evolve(initial, t);
}

}  // namespace magnon
