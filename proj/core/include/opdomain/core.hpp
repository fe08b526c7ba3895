#pragma once

// Domain types for operators given as infinite matrices on l^2(N), N = {1,2,...}:
// entry generators, structural metadata, truncation windows and exact finite
// sections.  Indices are 1-based throughout the public surface.

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "opdomain/exprlang.hpp"

namespace opdomain::core {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// Truncation region [lo, hi] of index space, plus band-exactness padding.
struct Window {
  long lo = 1;
  long hi = 1;
  long pad = 0;

  Window() = default;
  Window(long lo_, long hi_, long pad_ = 0) : lo(lo_), hi(hi_), pad(pad_) {
    if (lo < 1 || hi < lo || pad < 0) throw std::invalid_argument("invalid window");
  }
  long size() const { return hi - lo + 1; }
};

class GenError : public std::runtime_error {
 public:
  GenError(long k, long l, const std::string& what)
      : std::runtime_error("entry generator failed at (" + std::to_string(k) + "," +
                           std::to_string(l) + "): " + what),
        k_(k),
        l_(l) {}
  long k() const { return k_; }
  long l() const { return l_; }

 private:
  long k_, l_;
};

// One matrix entry generator: a total deterministic map N x N -> C.
class EntryGen {
 public:
  struct Zero {};
  struct Identity {};
  struct Shift {};  // a_{k,k+1} = 1
  struct Diagonal {
    std::string c_src;
    exprlang::ExprPtr c;
  };
  struct Jacobi {  // a_{k,k} = diag(k), a_{k,k+1} = a_{k+1,k} = offdiag(k)
    std::string diag_src, offdiag_src;
    exprlang::ExprPtr diag, offdiag;
  };
  struct PairswapJacobi {  // rows of a Jacobi matrix permuted by 2j-1 <-> 2j
    std::string diag_src, offdiag_src;
    exprlang::ExprPtr diag, offdiag;
  };
  struct PowerBand {  // d(1+k+l)/|k-l|^alpha off the diagonal, d(k+1)^s on it
    double d = 1, s = 0, alpha = 3;
  };
  struct AntidiagBlocks {  // block diagonal, each block +-antidiagonal; pattern repeats
    std::vector<long> sizes;
    std::vector<int> signs;
  };
  struct Table {
    std::map<std::pair<long, long>, cplx> entries;  // zero outside
  };
  struct Expression {
    std::string src;
    exprlang::ExprPtr ast;  // free variables k, l
  };

  static EntryGen zero();
  static EntryGen identity();
  static EntryGen shift();
  static EntryGen diagonal(const std::string& c_expr);
  static EntryGen jacobi(const std::string& diag_expr, const std::string& offdiag_expr);
  static EntryGen pairswap_jacobi(const std::string& diag_expr, const std::string& offdiag_expr);
  static EntryGen power_band(double d, double s, double alpha);
  static EntryGen antidiagonal_blocks(std::vector<long> sizes, std::vector<int> signs);
  static EntryGen table(std::map<std::pair<long, long>, cplx> entries);
  static EntryGen expression(const std::string& src);

  cplx operator()(long k, long l) const;

  // Band width implied by the generator's own structure, when it has one.
  std::optional<long> intrinsic_bandwidth() const;

  // Additive single-entry perturbation, layered on top of the generator.
  void perturb(long k, long l, cplx delta);
  const std::map<std::pair<long, long>, cplx>& perturbations() const { return perturbations_; }

  std::string kind_name() const;

  using Node = std::variant<Zero, Identity, Shift, Diagonal, Jacobi, PairswapJacobi, PowerBand,
                            AntidiagBlocks, Table, Expression>;
  const Node& node() const { return node_; }

 private:
  explicit EntryGen(Node n) : node_(std::move(n)) {}
  Node node_;
  std::map<std::pair<long, long>, cplx> perturbations_;
};

enum class Symmetry { None, Hermitian, Real };

// Infinite matrix operator: generator plus structural metadata.
struct OperatorSpec {
  EntryGen entries;
  std::optional<long> bandwidth;  // entries vanish for |k-l| > bandwidth
  Symmetry declared_symmetry = Symmetry::None;

  explicit OperatorSpec(EntryGen gen, std::optional<long> band = std::nullopt,
                        Symmetry sym = Symmetry::None);

  cplx at(long k, long l) const { return entries(k, l); }
  std::optional<long> band() const;
};

// Real sequence c : N -> R, realized by an entry generator restricted to the
// diagonal (expressions may use the free variable k).
class DiagonalSpec {
 public:
  static DiagonalSpec from_expr(const std::string& c_expr);
  static DiagonalSpec from_gen(EntryGen gen);
  static DiagonalSpec from_values(std::vector<double> values);  // zero tail
  // c_k = expr(j) with j the 1-based index of the size-`block_size` block
  // containing k, i.e. j = ceil(k / block_size)
  static DiagonalSpec from_block_expr(const std::string& c_expr, long block_size);

  double at(long k) const;

  const EntryGen& gen() const { return gen_; }
  long block_size() const { return block_size_; }

 private:
  explicit DiagonalSpec(EntryGen gen, long block_size = 1)
      : gen_(std::move(gen)), block_size_(block_size) {}
  EntryGen gen_;
  long block_size_ = 1;
};

// The H/G matrix pair (Gram operator and its inverse), with band metadata for G.
struct PairingSpec {
  EntryGen h;
  EntryGen g;
  long p = 0;                    // band width of g
  std::optional<double> s_g;     // declared sup of |g_{k,l}|
};

// Finite section [entries(k,l)] for k,l in [w.lo, w.hi].
Matrix truncate(const EntryGen& gen, const Window& w);
Matrix truncate(const OperatorSpec& spec, const Window& w);

// Product of two infinite matrices restricted to [lo,hi]^2, exactly equal to
// the infinite product there.  Requires at least one banded factor (the band
// limits the inner sum to finitely many terms) and w.pad >= that band width.
Matrix exact_product_window(const EntryGen& a, std::optional<long> band_a, const EntryGen& b,
                            std::optional<long> band_b, const Window& w);
Matrix exact_product_window(const OperatorSpec& a, const OperatorSpec& b, const Window& w);

}  // namespace opdomain::core
