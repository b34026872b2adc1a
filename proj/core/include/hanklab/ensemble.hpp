#pragma once

// Band Hankel ensembles built from Brownian or i.i.d. symbol families.
//
// The Hankel matrix is H = P T where T = (a_{i-j} 1{|i-j| <= b}) is band
// Toeplitz and P is the backward identity. Entry (i,j) of H is therefore
// a_{n+1-i-j} when |n+1-i-j| <= b and zero otherwise. The anti-diagonal
// symbol a_0 is identically zero; a nonzero a_0 path only enters through
// the diagonal shift of build_tilde_A.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace hanklab {

/// How negative symbol indices relate to positive ones.
enum class IndexConvention {
  symmetric,    // a_{-k} = a_k, T symmetric
  independent,  // a_{-k} an independent copy
};

enum class EntryKind { brownian, iid };

enum class IidLaw { standard_gaussian, rademacher, centered_uniform };

inline constexpr double kDefaultBandwidthExponent = 0.6;

/// floor(n^gamma), clamped to [1, n]. A relative slack of 1e-12 keeps exact
/// powers such as 1024^0.6 = 64 from rounding down.
int bandwidth_from_rule(int n, double gamma);

struct BandConfig {
  int n = 1;
  int bandwidth = 1;
  std::optional<double> gamma;  // set when bandwidth came from floor(n^gamma)
  IndexConvention convention = IndexConvention::symmetric;

  static BandConfig with_rule(int n, double gamma, IndexConvention convention = IndexConvention::symmetric);
  static BandConfig with_bandwidth(int n, int bandwidth,
                                   IndexConvention convention = IndexConvention::symmetric);
  void validate() const;
};

struct EntryModel {
  EntryKind kind = EntryKind::brownian;
  IidLaw law = IidLaw::standard_gaussian;
  bool include_a0 = false;

  [[nodiscard]] bool gaussian() const noexcept {
    return kind == EntryKind::brownian || law == IidLaw::standard_gaussian;
  }
};

std::string_view to_string(IndexConvention convention) noexcept;
std::string_view to_string(EntryKind kind) noexcept;
std::string_view to_string(IidLaw law) noexcept;
IndexConvention parse_convention(std::string_view text);
EntryKind parse_entry_kind(std::string_view text);
IidLaw parse_law(std::string_view text);

/// Values of the symbol processes a_j(.) on a time grid. Storage is one row
/// per grid time and one column per symbol slot: slot |j| under the symmetric
/// convention, slot j + b under the independent one.
class SymbolPaths {
 public:
  SymbolPaths(std::vector<double> times, int bandwidth, IndexConvention convention, Eigen::MatrixXd values);

  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] int bandwidth() const noexcept { return bandwidth_; }
  [[nodiscard]] IndexConvention convention() const noexcept { return convention_; }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }

  /// a_j at grid position `time_index`, for signed |j| <= bandwidth.
  [[nodiscard]] double value(std::size_t time_index, int j) const {
    return values_(static_cast<Eigen::Index>(time_index), slot(j));
  }
  [[nodiscard]] double a0(std::size_t time_index) const { return value(time_index, 0); }

  /// Grid position of time t; throws ConfigError when t is not on the grid.
  [[nodiscard]] std::size_t time_index(double t) const;

  [[nodiscard]] Eigen::Index slot(int j) const noexcept {
    return convention_ == IndexConvention::symmetric ? (j < 0 ? -j : j) : j + bandwidth_;
  }
  [[nodiscard]] static int slot_count(int bandwidth, IndexConvention convention) noexcept {
    return convention == IndexConvention::symmetric ? bandwidth + 1 : 2 * bandwidth + 1;
  }

 private:
  std::vector<double> times_;
  int bandwidth_;
  IndexConvention convention_;
  Eigen::MatrixXd values_;
};

/// Draws every symbol path on `grid` from a mt19937_64 stream seeded with
/// `seed`. Brownian paths start at N(0, t_1) and add N(0, dt) increments;
/// i.i.d. models take a single grid time. The a_0 column stays zero unless
/// the model includes it.
SymbolPaths sample_symbol_paths(const EntryModel& model, const BandConfig& config, std::span<const double> grid,
                                std::uint64_t seed);

/// Zero pattern of a symmetric matrix, used by the matmul trace route.
enum class BandShape {
  diagonal,       // zero when |i - j| > half_width
  anti_diagonal,  // zero when |n + 1 - i - j| > half_width
  dense,
};

class SymmetricBandMatrix {
 public:
  SymmetricBandMatrix(Eigen::MatrixXd values, BandShape shape, int half_width);

  [[nodiscard]] int order() const noexcept { return static_cast<int>(values_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& values() const noexcept { return values_; }
  [[nodiscard]] BandShape shape() const noexcept { return shape_; }
  [[nodiscard]] int half_width() const noexcept { return half_width_; }
  /// 0-based entry access.
  [[nodiscard]] double operator()(int row, int col) const { return values_(row, col); }

  /// Inclusive 0-based row range that may be nonzero in column `col`.
  [[nodiscard]] std::pair<int, int> column_support(int col) const noexcept;

 private:
  Eigen::MatrixXd values_;
  BandShape shape_;
  int half_width_;
};

SymmetricBandMatrix build_band_hankel(const SymbolPaths& paths, std::size_t time_index, const BandConfig& config);

/// Every entry divided by sqrt(b).
SymmetricBandMatrix scale_to_A(const SymmetricBandMatrix& hankel, const BandConfig& config);

/// Every entry multiplied by `factor`; shape is preserved.
SymmetricBandMatrix scaled(const SymmetricBandMatrix& matrix, double factor);

/// A + (a0 / sqrt(b)) I.
SymmetricBandMatrix build_tilde_A(const SymmetricBandMatrix& a, double a0_value, const BandConfig& config);

/// Row-major CSV of all entries with 17 significant digits.
void write_matrix_csv(std::ostream& out, const SymmetricBandMatrix& matrix);

}  // namespace hanklab
