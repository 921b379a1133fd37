#include "spinthermal/thermal.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <tuple>

#include "spinthermal/parallel.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace spinthermal {

namespace {

// All parallelism lives at the sector / realization level; BLAS stays
// single-threaded so results never depend on its internal scheduling.
void pin_blas_threads() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  });
}

constexpr double kGroundWindowScale = 1e-10;

void check_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw ValidationError("matrix is not symmetric within tolerance");
  }
}

// Eigen for small blocks, LAPACK divide-and-conquer above that. Vectors
// replace the input in either case; values come out ascending.
void solve_symmetric_inplace(Eigen::MatrixXd& m, Eigen::VectorXd& values,
                             int block_id) {
  pin_blas_threads();
  const int n = static_cast<int>(m.rows());
  values.resize(n);
  if (n == 0) return;
  if (n <= 32) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error("eigensolver failed on block " +
                               std::to_string(block_id));
    }
    values = solver.eigenvalues();
    m = solver.eigenvectors();
    return;
  }
  const int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, m.data(), n,
                                  values.data());
  if (info != 0) {
    throw std::runtime_error("dsyevd failed on block " +
                             std::to_string(block_id) + " (info " +
                             std::to_string(info) + ")");
  }
}

void merge_spectrum(SpectralDecomposition& decomp) {
  std::vector<std::tuple<double, int, int>> entries;
  entries.reserve(decomp.dim);
  for (int b = 0; b < static_cast<int>(decomp.blocks.size()); ++b) {
    const auto& values = decomp.blocks[b].values;
    for (int c = 0; c < values.size(); ++c) {
      entries.emplace_back(values[c], b, c);
    }
  }
  std::sort(entries.begin(), entries.end());
  decomp.eigenvalues.reserve(entries.size());
  decomp.order.reserve(entries.size());
  for (const auto& [value, b, c] : entries) {
    decomp.eigenvalues.push_back(value);
    decomp.order.emplace_back(b, c);
  }
}

int log2_exact(int dim) {
  return (dim > 0 && (dim & (dim - 1)) == 0) ? std::countr_zero(
                                                    static_cast<unsigned>(dim))
                                             : 0;
}

}  // namespace

double ThermalWeights::total() const {
  double sum = 0.0;
  for (const auto& w : block_weights) sum += w.sum();
  return sum;
}

SpectralDecomposition diagonalize(const Eigen::MatrixXd& matrix) {
  check_symmetric(matrix);
  SpectralDecomposition decomp;
  decomp.dim = static_cast<int>(matrix.rows());
  decomp.sites = log2_exact(decomp.dim);

  SpectralDecomposition::Block block;
  block.sector = -1;
  block.basis.resize(decomp.dim);
  std::iota(block.basis.begin(), block.basis.end(), BasisState{0});
  block.vectors = matrix;
  solve_symmetric_inplace(block.vectors, block.values, 0);
  decomp.blocks.push_back(std::move(block));
  merge_spectrum(decomp);
  return decomp;
}

SpectralDecomposition diagonalize(const SectorBlocks& blocks, int threads) {
  SpectralDecomposition decomp;
  decomp.sites = blocks.sites;
  decomp.dim = 1 << blocks.sites;
  decomp.blocks.resize(blocks.blocks.size());
  for (std::size_t m = 0; m < blocks.blocks.size(); ++m) {
    check_symmetric(blocks.blocks[m]);
    decomp.blocks[m].sector = static_cast<int>(m);
    decomp.blocks[m].basis = blocks.basis[m];
    decomp.blocks[m].vectors = blocks.blocks[m];
  }
  // Largest sectors first so the pool drains evenly.
  std::vector<std::size_t> order(blocks.blocks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return blocks.blocks[a].rows() > blocks.blocks[b].rows();
  });
  parallel_for_index(order.size(), threads, [&](std::size_t k) {
    auto& block = decomp.blocks[order[k]];
    solve_symmetric_inplace(block.vectors, block.values, block.sector);
  });
  merge_spectrum(decomp);
  return decomp;
}

ThermalWeights thermal_weights(const SpectralDecomposition& decomp,
                               double beta) {
  if (std::isnan(beta) || beta < 0.0) {
    throw ValidationError("beta must be >= 0");
  }
  ThermalWeights out;
  out.beta = beta;
  out.energy_shift = decomp.min_eigenvalue();
  out.block_weights.resize(decomp.blocks.size());

  double z = 0.0;
  if (std::isinf(beta)) {
    // Uniform mixture over the ground multiplet.
    const double window =
        kGroundWindowScale * std::max(1.0, std::abs(out.energy_shift));
    std::size_t count = 0;
    for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
      const auto& values = decomp.blocks[b].values;
      auto& w = out.block_weights[b];
      w = Eigen::VectorXd::Zero(values.size());
      for (int c = 0; c < values.size(); ++c) {
        if (values[c] - out.energy_shift <= window) {
          w[c] = 1.0;
          ++count;
        }
      }
    }
    for (auto& w : out.block_weights) w /= static_cast<double>(count);
    out.log_z = std::log(static_cast<double>(count));
    return out;
  }

  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    const auto& values = decomp.blocks[b].values;
    auto& w = out.block_weights[b];
    w.resize(values.size());
    for (int c = 0; c < values.size(); ++c) {
      w[c] = std::exp(-beta * (values[c] - out.energy_shift));
    }
    z += w.sum();
  }
  for (auto& w : out.block_weights) w /= z;
  out.log_z = std::log(z);
  return out;
}

Eigen::MatrixXd gibbs_state(const SpectralDecomposition& decomp, double beta) {
  if (decomp.dim > (1 << kDenseMaxSites)) {
    throw ResourceLimitError(
        "refusing to materialize a dense Gibbs state beyond 2^" +
        std::to_string(kDenseMaxSites) + " dimensions");
  }
  const ThermalWeights tw = thermal_weights(decomp, beta);
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(decomp.dim, decomp.dim);
  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    const auto& block = decomp.blocks[b];
    const Eigen::MatrixXd dense_block =
        block.vectors * tw.block_weights[b].asDiagonal() *
        block.vectors.transpose();
    for (std::size_t r = 0; r < block.basis.size(); ++r) {
      for (std::size_t c = 0; c < block.basis.size(); ++c) {
        rho(block.basis[r], block.basis[c]) = dense_block(r, c);
      }
    }
  }
  return rho;
}

namespace {

// log cosh / log sinh without overflow.
double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

double log_sinh(double x) {  // x > 0
  return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2;
}

}  // namespace

PairGibbsElements two_spin_gibbs_elements(const PairSpec& spec, double beta) {
  spec.validate();
  if (spec.J == 0.0) {
    throw std::domain_error(
        "J = 0: the Gibbs state is diagonal with weights exp(-beta E_field); "
        "the flip-flop closed form does not apply");
  }
  if (!std::isfinite(beta) || beta < 0.0) {
    throw ValidationError("beta must be finite and >= 0");
  }

  const double xi = spec.xi();
  const double a = 0.5 * spec.gamma * beta * spec.J;
  const double b = xi * beta * std::abs(spec.J);
  const double c = 0.5 * (spec.h1 + spec.h2) * beta;
  const double sign_j = spec.J > 0.0 ? 1.0 : -1.0;
  // q = (h1 - h2) / (2 |J| xi): the middle-block field share.
  const double q = sign_j * (0.5 / xi) * ((spec.h1 - spec.h2) / spec.J);

  // Everything is scaled by exp(-m) so the largest term is O(1).
  const double pair_log = a + log_cosh(b);
  const double field_log = log_cosh(c);
  const double m = std::max(pair_log, field_log);
  const double den = 2.0 * (std::exp(pair_log - m) + std::exp(field_log - m));

  PairGibbsElements e{};
  e.u = std::exp(c - m) / den;
  e.v = std::exp(-c - m) / den;
  const double pair_term = std::exp(pair_log - m);
  const double tanh_b = std::tanh(b);
  e.w = pair_term * (1.0 - q * tanh_b) / den;
  e.wp = pair_term * (1.0 + q * tanh_b) / den;
  e.z = b > 0.0
            ? -sign_j / (2.0 * xi) * std::exp(a + log_sinh(b) - m) / den
            : 0.0;
  return e;
}

DensityMatrix4 two_spin_gibbs_state(const PairSpec& spec, double beta) {
  const Eigen::MatrixXd rho =
      gibbs_state(diagonalize(two_spin_hamiltonian(spec)), beta);
  return rho.cast<std::complex<double>>();
}

namespace {

// Binomials up to the largest supported chain.
constexpr int kMaxChoose = kDefaultMaxSites + 1;

const std::array<std::array<std::uint32_t, kMaxChoose>, kMaxChoose>&
choose_table() {
  static const auto table = [] {
    std::array<std::array<std::uint32_t, kMaxChoose>, kMaxChoose> t{};
    for (int n = 0; n < kMaxChoose; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) {
        t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
      }
    }
    return t;
  }();
  return table;
}

// Rank of `bits` among equal-popcount integers in increasing numeric order
// (colexicographic combination rank).
std::uint32_t popcount_rank(BasisState bits) {
  const auto& choose = choose_table();
  std::uint32_t rank = 0;
  int seen = 0;
  while (bits != 0) {
    const int p = std::countr_zero(bits);
    bits &= bits - 1;
    ++seen;
    rank += choose[p][seen];
  }
  return rank;
}

// Removes the two pair bits from a basis state; the remaining bits close up.
BasisState compress_rest(BasisState s, int lo_bit, int hi_bit) {
  const BasisState low = s & ((BasisState{1} << lo_bit) - 1);
  const BasisState mid = (s >> (lo_bit + 1)) & ((BasisState{1} << (hi_bit - lo_bit - 1)) - 1);
  const BasisState high = s >> (hi_bit + 1);
  return low | (mid << lo_bit) | (high << (hi_bit - 1));
}

struct PairAccumulator {
  // Scratch amplitude tables, one per pair configuration, indexed either
  // by popcount rank (sector blocks) or by the raw rest value (dense
  // blocks). Touched entries are reset between eigenvectors.
  std::array<std::vector<double>, 4> slot;
  std::array<std::vector<std::uint32_t>, 4> touched;

  void resize(const std::array<std::size_t, 4>& sizes) {
    for (int a = 0; a < 4; ++a) {
      slot[a].assign(sizes[a], 0.0);
      touched[a].clear();
    }
  }

  void clear_touched() {
    for (int a = 0; a < 4; ++a) {
      for (auto idx : touched[a]) slot[a][idx] = 0.0;
      touched[a].clear();
    }
  }
};

}  // namespace

DensityMatrix4 partial_trace_pair(const SpectralDecomposition& decomp,
                                  double beta, int site_i, int site_j) {
  const int L = decomp.sites;
  if (L < 2) throw ValidationError("decomposition does not describe a chain");
  if (site_i < 1 || site_j <= site_i || site_j > L) {
    throw ValidationError("pair sites must satisfy 1 <= i < j <= L");
  }
  const int lo_bit = site_i - 1;
  const int hi_bit = site_j - 1;
  const auto& choose = choose_table();
  const ThermalWeights tw = thermal_weights(decomp, beta);

  Eigen::Matrix4d rho2 = Eigen::Matrix4d::Zero();
  PairAccumulator acc;
  std::vector<std::uint32_t> rest_index;  // per basis state of the block
  std::vector<std::uint8_t> config;       // pair configuration per state

  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    const auto& block = decomp.blocks[b];
    const auto& weights = tw.block_weights[b];
    const std::size_t dim = block.basis.size();
    if (dim == 0 || weights.maxCoeff() < 1e-18) continue;

    const bool sector_block = block.sector >= 0;
    std::array<std::size_t, 4> sizes{};
    if (sector_block) {
      // Popcount of the rest is fixed per pair configuration.
      for (int a = 0; a < 4; ++a) {
        const int rest_pop = block.sector - std::popcount(unsigned(a));
        sizes[a] = (rest_pop >= 0 && rest_pop <= L - 2)
                       ? choose[L - 2][rest_pop]
                       : 0;
      }
    } else {
      sizes.fill(std::size_t{1} << (L - 2));
    }
    acc.resize(sizes);

    rest_index.resize(dim);
    config.resize(dim);
    for (std::size_t t = 0; t < dim; ++t) {
      const BasisState s = block.basis[t];
      config[t] = static_cast<std::uint8_t>(((s >> lo_bit) & 1) |
                                            (((s >> hi_bit) & 1) << 1));
      const BasisState rest = compress_rest(s, lo_bit, hi_bit);
      rest_index[t] = sector_block ? popcount_rank(rest) : rest;
    }

    for (int col = 0; col < static_cast<int>(weights.size()); ++col) {
      const double w = weights[col];
      if (w < 1e-18) continue;
      const double* v = block.vectors.col(col).data();
      // Each basis state maps to a unique (configuration, rest) slot, so
      // plain assignment is enough.
      for (std::size_t t = 0; t < dim; ++t) {
        const int a = config[t];
        acc.touched[a].push_back(rest_index[t]);
        acc.slot[a][rest_index[t]] = v[t];
      }
      for (int a = 0; a < 4; ++a) {
        for (int ap = a; ap < 4; ++ap) {
          if (sector_block &&
              std::popcount(unsigned(a)) != std::popcount(unsigned(ap))) {
            continue;  // no cross-sector coherence survives the trace
          }
          if (acc.slot[a].empty() || acc.slot[ap].empty()) continue;
          double dot = 0.0;
          if (a == ap) {
            for (auto idx : acc.touched[a]) dot += acc.slot[a][idx] * acc.slot[a][idx];
          } else {
            const auto& shorter =
                acc.touched[a].size() <= acc.touched[ap].size() ? acc.touched[a]
                                                                : acc.touched[ap];
            const auto& src = acc.touched[a].size() <= acc.touched[ap].size()
                                  ? acc.slot[ap]
                                  : acc.slot[a];
            const auto& own = acc.touched[a].size() <= acc.touched[ap].size()
                                  ? acc.slot[a]
                                  : acc.slot[ap];
            for (auto idx : shorter) dot += own[idx] * src[idx];
          }
          rho2(a, ap) += w * dot;
          if (a != ap) rho2(ap, a) += w * dot;
        }
      }
      acc.clear_touched();
    }
  }
  return rho2.cast<std::complex<double>>();
}

DensityMatrix4 partial_trace_pair(const Eigen::MatrixXd& rho_full, int sites,
                                  int site_i, int site_j) {
  if (sites < 2 || sites > kDenseMaxSites) {
    throw ResourceLimitError("dense partial trace supports 2..12 sites");
  }
  if (rho_full.rows() != (Eigen::Index{1} << sites) ||
      rho_full.cols() != rho_full.rows()) {
    throw ValidationError("density matrix dimension does not match the sites");
  }
  if (site_i < 1 || site_j <= site_i || site_j > sites) {
    throw ValidationError("pair sites must satisfy 1 <= i < j <= L");
  }
  const int lo_bit = site_i - 1;
  const int hi_bit = site_j - 1;

  // Scatter a rest value over every position except the pair bits.
  auto embed = [&](BasisState rest, int b_lo, int b_hi) {
    BasisState s = 0;
    int src = 0;
    for (int p = 0; p < sites; ++p) {
      if (p == lo_bit || p == hi_bit) continue;
      s |= ((rest >> src) & 1u) << p;
      ++src;
    }
    s |= BasisState(b_lo) << lo_bit;
    s |= BasisState(b_hi) << hi_bit;
    return s;
  };

  Eigen::Matrix4d rho2 = Eigen::Matrix4d::Zero();
  const BasisState rest_dim = BasisState{1} << (sites - 2);
  for (int a = 0; a < 4; ++a) {
    for (int ap = 0; ap < 4; ++ap) {
      double sum = 0.0;
      for (BasisState r = 0; r < rest_dim; ++r) {
        sum += rho_full(embed(r, a & 1, (a >> 1) & 1),
                        embed(r, ap & 1, (ap >> 1) & 1));
      }
      rho2(a, ap) = sum;
    }
  }
  return rho2.cast<std::complex<double>>();
}

EnergyScales energy_scales(const SpectralDecomposition& decomp, double beta) {
  EnergyScales scales;
  scales.e0 = decomp.min_eigenvalue();
  scales.emax = decomp.max_eigenvalue();
  scales.einf =
      std::accumulate(decomp.eigenvalues.begin(), decomp.eigenvalues.end(),
                      0.0) /
      static_cast<double>(decomp.dim);
  scales.delta_e = (scales.emax - scales.e0) / 3.0;

  if (beta == 0.0) {
    // The two means coincide identically at infinite temperature.
    scales.ebar = scales.einf;
    return scales;
  }
  const ThermalWeights tw = thermal_weights(decomp, beta);
  double ebar = 0.0;
  for (std::size_t b = 0; b < decomp.blocks.size(); ++b) {
    ebar += decomp.blocks[b].values.dot(tw.block_weights[b]);
  }
  scales.ebar = ebar;
  return scales;
}

double gibbs_purity(const ThermalWeights& weights) {
  double sum = 0.0;
  for (const auto& w : weights.block_weights) sum += w.squaredNorm();
  return sum;
}

double purity(const DensityMatrix4& rho) { return rho.squaredNorm(); }

void validate_density_matrix(const DensityMatrix4& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) {
    throw ValidationError("density matrix is not Hermitian within tolerance");
  }
  const double trace_err = std::abs(rho.trace() - std::complex<double>(1.0));
  if (trace_err > 1e-10) {
    throw ValidationError("density matrix trace deviates from 1");
  }
  Eigen::SelfAdjointEigenSolver<DensityMatrix4> solver(rho);
  if (solver.eigenvalues().minCoeff() < -1e-12) {
    throw ValidationError("density matrix has a negative eigenvalue");
  }
}

}  // namespace spinthermal
