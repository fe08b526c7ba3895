#include "opdomain/core.hpp"

#include <cmath>
#include <numeric>

namespace opdomain::core {

namespace {

exprlang::ExprPtr parse_or_throw(const std::string& src) {
  return exprlang::parse(src);
}

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

cplx eval_seq(const exprlang::ExprPtr& e, long k) {
  return exprlang::eval(e, {{"k", cplx(static_cast<double>(k), 0.0)}});
}

// Locate the repeating antidiagonal block containing index k (1-based).
// Returns (block_lo, block_hi, sign).
std::tuple<long, long, int> block_of(const EntryGen::AntidiagBlocks& b, long k) {
  long period = std::accumulate(b.sizes.begin(), b.sizes.end(), 0L);
  long cycles = (k - 1) / period;
  long rem = (k - 1) % period;
  long lo = cycles * period + 1;
  for (std::size_t i = 0; i < b.sizes.size(); ++i) {
    if (rem < b.sizes[i]) return {lo, lo + b.sizes[i] - 1, b.signs[i]};
    rem -= b.sizes[i];
    lo += b.sizes[i];
  }
  throw std::logic_error("block_of: inconsistent block pattern");
}

}  // namespace

EntryGen EntryGen::zero() { return EntryGen(Zero{}); }
EntryGen EntryGen::identity() { return EntryGen(Identity{}); }
EntryGen EntryGen::shift() { return EntryGen(Shift{}); }

EntryGen EntryGen::diagonal(const std::string& c_expr) {
  return EntryGen(Diagonal{c_expr, parse_or_throw(c_expr)});
}

EntryGen EntryGen::jacobi(const std::string& diag_expr, const std::string& offdiag_expr) {
  return EntryGen(Jacobi{diag_expr, offdiag_expr, parse_or_throw(diag_expr),
                         parse_or_throw(offdiag_expr)});
}

EntryGen EntryGen::pairswap_jacobi(const std::string& diag_expr,
                                   const std::string& offdiag_expr) {
  return EntryGen(PairswapJacobi{diag_expr, offdiag_expr, parse_or_throw(diag_expr),
                                 parse_or_throw(offdiag_expr)});
}

EntryGen EntryGen::power_band(double d, double s, double alpha) {
  if (d < 0 || s < 0) throw std::invalid_argument("power_band: d, s must be >= 0");
  return EntryGen(PowerBand{d, s, alpha});
}

EntryGen EntryGen::antidiagonal_blocks(std::vector<long> sizes, std::vector<int> signs) {
  if (sizes.empty()) throw std::invalid_argument("antidiagonal_blocks: empty size pattern");
  if (signs.empty()) signs.assign(sizes.size(), +1);
  if (signs.size() != sizes.size())
    throw std::invalid_argument("antidiagonal_blocks: sizes/signs length mismatch");
  for (long s : sizes)
    if (s < 1) throw std::invalid_argument("antidiagonal_blocks: block size must be >= 1");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("antidiagonal_blocks: signs must be +-1");
  return EntryGen(AntidiagBlocks{std::move(sizes), std::move(signs)});
}

EntryGen EntryGen::table(std::map<std::pair<long, long>, cplx> entries) {
  return EntryGen(Table{std::move(entries)});
}

EntryGen EntryGen::expression(const std::string& src) {
  return EntryGen(Expression{src, parse_or_throw(src)});
}

cplx EntryGen::operator()(long k, long l) const {
  if (k < 1 || l < 1) return {0.0, 0.0};
  cplx v;
  try {
    v = std::visit(
        [&](const auto& n) -> cplx {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Zero>) {
            return {0.0, 0.0};
          } else if constexpr (std::is_same_v<T, Identity>) {
            return k == l ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
          } else if constexpr (std::is_same_v<T, Shift>) {
            return l == k + 1 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
          } else if constexpr (std::is_same_v<T, Diagonal>) {
            return k == l ? eval_seq(n.c, k) : cplx(0.0, 0.0);
          } else if constexpr (std::is_same_v<T, Jacobi>) {
            if (k == l) return eval_seq(n.diag, k);
            if (l == k + 1) return eval_seq(n.offdiag, k);
            if (k == l + 1) return eval_seq(n.offdiag, l);
            return {0.0, 0.0};
          } else if constexpr (std::is_same_v<T, PairswapJacobi>) {
            long sk = (k % 2 == 1) ? k + 1 : k - 1;
            if (sk == l) return eval_seq(n.diag, sk);
            if (l == sk + 1) return eval_seq(n.offdiag, sk);
            if (sk == l + 1) return eval_seq(n.offdiag, l);
            return {0.0, 0.0};
          } else if constexpr (std::is_same_v<T, PowerBand>) {
            if (k == l) return cplx(n.d * std::pow(k + 1.0, n.s), 0.0);
            double dist = std::abs(static_cast<double>(k - l));
            return cplx(n.d * (1.0 + k + l) / std::pow(dist, n.alpha), 0.0);
          } else if constexpr (std::is_same_v<T, AntidiagBlocks>) {
            auto [lo, hi, sign] = block_of(n, k);
            if (l < lo || l > hi) return {0.0, 0.0};
            return (k + l == lo + hi) ? cplx(static_cast<double>(sign), 0.0) : cplx(0.0, 0.0);
          } else if constexpr (std::is_same_v<T, Table>) {
            auto it = n.entries.find({k, l});
            return it == n.entries.end() ? cplx(0.0, 0.0) : it->second;
          } else {
            return exprlang::eval(n.ast, {{"k", cplx(static_cast<double>(k), 0.0)},
                                          {"l", cplx(static_cast<double>(l), 0.0)}});
          }
        },
        node_);
  } catch (const exprlang::EvalError& e) {
    throw GenError(k, l, e.what());
  }
  if (!perturbations_.empty()) {
    auto it = perturbations_.find({k, l});
    if (it != perturbations_.end()) v += it->second;
  }
  if (!finite(v)) throw GenError(k, l, "non-finite value");
  return v;
}

std::optional<long> EntryGen::intrinsic_bandwidth() const {
  std::optional<long> base = std::visit(
      [&](const auto& n) -> std::optional<long> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Zero> || std::is_same_v<T, Identity> ||
                      std::is_same_v<T, Diagonal>) {
          return 0;
        } else if constexpr (std::is_same_v<T, Shift> || std::is_same_v<T, Jacobi>) {
          return 1;
        } else if constexpr (std::is_same_v<T, PairswapJacobi>) {
          return 2;  // row swap widens the Jacobi band by one
        } else if constexpr (std::is_same_v<T, AntidiagBlocks>) {
          long mx = 0;
          for (long s : n.sizes) mx = std::max(mx, s - 1);
          return mx;
        } else if constexpr (std::is_same_v<T, Table>) {
          long mx = 0;
          for (const auto& [kl, v] : n.entries)
            if (v != cplx(0.0, 0.0)) mx = std::max(mx, std::abs(kl.first - kl.second));
          return mx;
        } else {
          return std::nullopt;
        }
      },
      node_);
  if (base && !perturbations_.empty()) {
    long mx = *base;
    for (const auto& [kl, v] : perturbations_)
      mx = std::max(mx, std::abs(kl.first - kl.second));
    return mx;
  }
  return base;
}

void EntryGen::perturb(long k, long l, cplx delta) { perturbations_[{k, l}] += delta; }

std::string EntryGen::kind_name() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Zero>) return "zero";
        else if constexpr (std::is_same_v<T, Identity>) return "identity";
        else if constexpr (std::is_same_v<T, Shift>) return "shift";
        else if constexpr (std::is_same_v<T, Diagonal>) return "diagonal";
        else if constexpr (std::is_same_v<T, Jacobi>) return "jacobi";
        else if constexpr (std::is_same_v<T, PairswapJacobi>) return "pairswap-jacobi";
        else if constexpr (std::is_same_v<T, PowerBand>) return "power-band";
        else if constexpr (std::is_same_v<T, AntidiagBlocks>) return "antidiagonal-block";
        else if constexpr (std::is_same_v<T, Table>) return "table";
        else return "expression";
      },
      node_);
}

OperatorSpec::OperatorSpec(EntryGen gen, std::optional<long> band, Symmetry sym)
    : entries(std::move(gen)), bandwidth(band), declared_symmetry(sym) {
  if (bandwidth && *bandwidth < 0) throw std::invalid_argument("negative bandwidth");
}

std::optional<long> OperatorSpec::band() const {
  if (bandwidth) return bandwidth;
  return entries.intrinsic_bandwidth();
}

DiagonalSpec DiagonalSpec::from_expr(const std::string& c_expr) {
  return DiagonalSpec(EntryGen::diagonal(c_expr));
}

DiagonalSpec DiagonalSpec::from_gen(EntryGen gen) { return DiagonalSpec(std::move(gen)); }

DiagonalSpec DiagonalSpec::from_values(std::vector<double> values) {
  std::map<std::pair<long, long>, cplx> t;
  for (std::size_t i = 0; i < values.size(); ++i)
    t[{static_cast<long>(i + 1), static_cast<long>(i + 1)}] = cplx(values[i], 0.0);
  return DiagonalSpec(EntryGen::table(std::move(t)));
}

DiagonalSpec DiagonalSpec::from_block_expr(const std::string& c_expr, long block_size) {
  if (block_size < 1) throw std::invalid_argument("from_block_expr: block size must be >= 1");
  return DiagonalSpec(EntryGen::diagonal(c_expr), block_size);
}

double DiagonalSpec::at(long k) const {
  if (block_size_ > 1) k = (k - 1) / block_size_ + 1;
  cplx v = gen_(k, k);
  if (v.imag() != 0.0) throw GenError(k, k, "diagonal sequence must be real");
  return v.real();
}

Matrix truncate(const EntryGen& gen, const Window& w) {
  const long n = w.size();
  Matrix M(n, n);
  for (long r = 0; r < n; ++r)
    for (long c = 0; c < n; ++c) M(r, c) = gen(w.lo + r, w.lo + c);
  return M;
}

Matrix truncate(const OperatorSpec& spec, const Window& w) { return truncate(spec.entries, w); }

Matrix exact_product_window(const EntryGen& a, std::optional<long> band_a, const EntryGen& b,
                            std::optional<long> band_b, const Window& w) {
  if (!band_a && !band_b)
    throw std::invalid_argument(
        "exact_product_window: both factors unbanded, no exactness certificate");
  // Prefer the factor whose band limits the inner sum.
  const bool use_b = band_b.has_value() && (!band_a || *band_b <= *band_a);
  const long p = use_b ? *band_b : *band_a;
  if (w.pad < p)
    throw std::invalid_argument("exact_product_window: pad smaller than band width");
  const long n = w.size();
  Matrix M = Matrix::Zero(n, n);
  for (long r = 0; r < n; ++r) {
    const long k = w.lo + r;
    for (long c = 0; c < n; ++c) {
      const long l = w.lo + c;
      cplx sum(0.0, 0.0);
      const long j0 = std::max(1L, (use_b ? l : k) - p);
      const long j1 = (use_b ? l : k) + p;
      for (long j = j0; j <= j1; ++j) sum += a(k, j) * b(j, l);
      M(r, c) = sum;
    }
  }
  return M;
}

Matrix exact_product_window(const OperatorSpec& a, const OperatorSpec& b, const Window& w) {
  return exact_product_window(a.entries, a.band(), b.entries, b.band(), w);
}

}  // namespace opdomain::core
