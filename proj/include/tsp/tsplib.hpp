#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace tsp {

using Length = std::int64_t;

/// TSPLIB distance functions supported for symmetric instances.
enum class Metric { Euc2D, Ceil2D, Att, Geo, Explicit };

const char* metric_name(Metric m);

/// What went wrong while parsing, so tests and callers can tell the
/// failure modes apart without string matching.
enum class ParseErrorKind {
  UnsupportedKeyword,
  UnsupportedMetric,
  MalformedValue,
  DimensionMismatch,
  MissingSection,
  BadPermutation,
};

class ParseError : public std::exception {
 public:
  ParseError(ParseErrorKind kind, int line, std::string message);

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  ParseErrorKind kind_;
  int line_;
  std::string message_;
};

/// A parsed symmetric TSP instance. Cities are 0-based internally; the
/// 1-based TSPLIB indices exist only in the files.
///
/// Distances are exact integers per the TSPLIB95 rounding rules. For
/// n <= matrix_cap they are precomputed into a full matrix; above the
/// cap (coordinate metrics only) they are computed on demand.
class Instance {
 public:
  std::string name;
  int n = 0;
  Metric metric = Metric::Euc2D;
  std::vector<double> xs, ys;     // empty for Explicit
  std::optional<Length> known_optimum;

  static constexpr int kDefaultMatrixCap = 5000;

  /// Precomputes the distance matrix when n <= cap. Explicit instances
  /// always carry their matrix. Called by the parser; call again to
  /// change the cap.
  void finalize(int matrix_cap = kDefaultMatrixCap);

  /// Exact TSPLIB distance. Bounds-checked; throws std::out_of_range.
  Length distance(int i, int j) const;

  /// Unchecked distance for hot paths.
  Length dist(int i, int j) const {
    return matrix_.empty() ? compute_distance(i, j)
                           : matrix_[static_cast<size_t>(i) * n + j];
  }

  bool has_matrix() const { return !matrix_.empty(); }

  /// Adopts an explicit matrix (row-major n*n). Used by the parser and
  /// by tests that build instances directly.
  void set_matrix(std::vector<Length> m);

 private:
  Length compute_distance(int i, int j) const;
  std::vector<Length> matrix_;
};

/// A tour read from a TSPLIB .tour file. permutation is 0-based.
struct TourFile {
  std::string name;
  std::vector<int> permutation;
};

/// Parses a TSPLIB95 symmetric TSP document.
///
/// Supports EUC_2D, CEIL_2D, ATT, GEO and EXPLICIT weights with
/// FULL_MATRIX, UPPER_ROW or LOWER_DIAG_ROW layout. Anything else is
/// rejected with a ParseError naming the offending keyword and line.
Instance parse_instance(const std::string& text);
Instance load_instance(const std::string& path);

TourFile parse_tour(const std::string& text);
TourFile load_tour(const std::string& path);

/// Serializes in TSPLIB format. Explicit instances are written as
/// FULL_MATRIX so that reparsing reproduces the distance matrix
/// exactly; coordinate instances keep their metric.
std::string serialize_instance(const Instance& inst);

/// TOUR_SECTION format, 1-based indices, terminated by -1.
std::string serialize_tour(const std::string& name, const std::vector<int>& permutation);
void write_tour_file(const std::string& path, const std::string& name,
                     const std::vector<int>& permutation);

/// Cycle length including the closing edge, 64-bit accumulation.
Length tour_length(const Instance& inst, const std::vector<int>& permutation);

}  // namespace tsp
