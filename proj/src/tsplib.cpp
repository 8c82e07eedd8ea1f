#include "tsp/tsplib.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tsp {

namespace {

// TSPLIB95 rounding: nearest integer, halves up.
inline Length nint(double x) { return static_cast<Length>(x + 0.5); }

constexpr double kGeoPi = 3.141592;
constexpr double kEarthRadius = 6378.388;

double geo_radians(double coord) {
  double deg = std::trunc(coord);
  double min = coord - deg;
  return kGeoPi * (deg + 5.0 * min / 3.0) / 180.0;
}

Length geo_distance(double xi, double yi, double xj, double yj) {
  double lat_i = geo_radians(xi), lon_i = geo_radians(yi);
  double lat_j = geo_radians(xj), lon_j = geo_radians(yj);
  double q1 = std::cos(lon_i - lon_j);
  double q2 = std::cos(lat_i - lat_j);
  double q3 = std::cos(lat_i + lat_j);
  return static_cast<Length>(
      kEarthRadius * std::acos(0.5 * ((1.0 + q1) * q2 - (1.0 - q1) * q3)) + 1.0);
}

Length att_distance(double dx, double dy) {
  double r = std::sqrt((dx * dx + dy * dy) / 10.0);
  Length t = nint(r);
  return t < r ? t + 1 : t;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct Line {
  std::string keyword;  // empty when the line is section data
  std::string value;
  std::string raw;
  int number = 0;
};

// Keywords are upper-case words, possibly with underscores or digits
// (EUC_2D). A bare number is section data, never a keyword.
bool keyword_like(const std::string& s) {
  if (s.empty()) return false;
  bool has_alpha = false;
  for (unsigned char c : s) {
    if (std::isupper(c)) has_alpha = true;
    else if (c != '_' && !std::isdigit(c)) return false;
  }
  return has_alpha;
}

// Splits the document into lines, classifying "KEY[ ]:[ ]value" headers.
std::vector<Line> split_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    Line line;
    line.raw = raw;
    line.number = number;
    std::string t = trim(raw);
    size_t colon = t.find(':');
    if (colon != std::string::npos) {
      std::string key = trim(t.substr(0, colon));
      if (keyword_like(key)) {
        line.keyword = key;
        line.value = trim(t.substr(colon + 1));
      }
    } else if (keyword_like(t)) {
      line.keyword = t;  // section names and EOF
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

[[noreturn]] void fail(ParseErrorKind kind, const Line& line, const std::string& msg) {
  throw ParseError(kind, line.number, msg + " (line " + std::to_string(line.number) + ")");
}

// Pulls whitespace-separated numeric tokens out of data lines until
// `count` have been read or a keyword line is hit.
std::vector<double> read_numbers(const std::vector<Line>& lines, size_t& idx,
                                 size_t count, const char* section) {
  std::vector<double> out;
  out.reserve(count);
  while (out.size() < count && idx < lines.size()) {
    const Line& line = lines[idx];
    if (!line.keyword.empty()) break;
    std::istringstream ls(line.raw);
    double v;
    while (out.size() < count && ls >> v) out.push_back(v);
    if (out.size() < count) {
      ls.clear();
      std::string leftover;
      if (ls >> leftover)
        fail(ParseErrorKind::MalformedValue, line,
             std::string("bad number '") + leftover + "' in " + section);
    }
    ++idx;
  }
  if (out.size() < count && idx < lines.size())
    fail(ParseErrorKind::DimensionMismatch, lines[idx],
         std::string(section) + " ended early: expected " + std::to_string(count) +
             " values, got " + std::to_string(out.size()));
  if (out.size() < count)
    throw ParseError(ParseErrorKind::DimensionMismatch, 0,
                     std::string(section) + " ended early: expected " +
                         std::to_string(count) + " values, got " +
                         std::to_string(out.size()));
  return out;
}

enum class WeightFormat { FullMatrix, UpperRow, LowerDiagRow };

// Shortest decimal form that parses back to the same double.
std::string format_coord(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* metric_name(Metric m) {
  switch (m) {
    case Metric::Euc2D: return "EUC_2D";
    case Metric::Ceil2D: return "CEIL_2D";
    case Metric::Att: return "ATT";
    case Metric::Geo: return "GEO";
    case Metric::Explicit: return "EXPLICIT";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, int line, std::string message)
    : kind_(kind), line_(line), message_(std::move(message)) {}

void Instance::set_matrix(std::vector<Length> m) {
  if (m.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("matrix size does not match dimension");
  matrix_ = std::move(m);
}

void Instance::finalize(int matrix_cap) {
  if (metric == Metric::Explicit) return;  // matrix came from the file
  if (n <= matrix_cap) {
    matrix_.assign(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Length d = compute_distance(i, j);
        matrix_[static_cast<size_t>(i) * n + j] = d;
        matrix_[static_cast<size_t>(j) * n + i] = d;
      }
  } else {
    matrix_.clear();
  }
}

Length Instance::compute_distance(int i, int j) const {
  if (i == j) return 0;
  double dx = xs[i] - xs[j], dy = ys[i] - ys[j];
  switch (metric) {
    case Metric::Euc2D: return nint(std::sqrt(dx * dx + dy * dy));
    case Metric::Ceil2D: return static_cast<Length>(std::ceil(std::sqrt(dx * dx + dy * dy)));
    case Metric::Att: return att_distance(dx, dy);
    case Metric::Geo: return geo_distance(xs[i], ys[i], xs[j], ys[j]);
    case Metric::Explicit: break;
  }
  throw std::logic_error("explicit instance without matrix");
}

Length Instance::distance(int i, int j) const {
  if (i < 0 || i >= n || j < 0 || j >= n)
    throw std::out_of_range("city index out of range: " + std::to_string(i) + "," +
                            std::to_string(j) + " for n=" + std::to_string(n));
  return dist(i, j);
}

Instance parse_instance(const std::string& text) {
  std::vector<Line> lines = split_lines(text);
  Instance inst;
  int dimension = -1;
  std::optional<Metric> metric;
  std::optional<WeightFormat> format;
  bool saw_coords = false, saw_weights = false;

  size_t idx = 0;
  while (idx < lines.size()) {
    const Line& line = lines[idx];
    if (line.keyword.empty()) {
      std::string t = trim(line.raw);
      if (t.empty()) {
        ++idx;
        continue;
      }
      fail(ParseErrorKind::MalformedValue, line, "unexpected data outside any section");
    }
    const std::string& key = line.keyword;
    if (key == "NAME") {
      inst.name = line.value;
      ++idx;
    } else if (key == "TYPE") {
      if (line.value != "TSP")
        fail(ParseErrorKind::UnsupportedMetric, line,
             "unsupported TYPE '" + line.value + "' (only symmetric TSP)");
      ++idx;
    } else if (key == "COMMENT" || key == "DISPLAY_DATA_TYPE" || key == "NODE_COORD_TYPE") {
      ++idx;
    } else if (key == "DIMENSION") {
      try {
        dimension = std::stoi(line.value);
      } catch (const std::exception&) {
        fail(ParseErrorKind::MalformedValue, line, "DIMENSION is not an integer");
      }
      if (dimension < 1)
        fail(ParseErrorKind::MalformedValue, line, "DIMENSION must be positive");
      inst.n = dimension;
      ++idx;
    } else if (key == "EDGE_WEIGHT_TYPE") {
      if (line.value == "EUC_2D") metric = Metric::Euc2D;
      else if (line.value == "CEIL_2D") metric = Metric::Ceil2D;
      else if (line.value == "ATT") metric = Metric::Att;
      else if (line.value == "GEO") metric = Metric::Geo;
      else if (line.value == "EXPLICIT") metric = Metric::Explicit;
      else
        fail(ParseErrorKind::UnsupportedMetric, line,
             "unsupported EDGE_WEIGHT_TYPE '" + line.value + "'");
      ++idx;
    } else if (key == "EDGE_WEIGHT_FORMAT") {
      if (line.value == "FULL_MATRIX") format = WeightFormat::FullMatrix;
      else if (line.value == "UPPER_ROW") format = WeightFormat::UpperRow;
      else if (line.value == "LOWER_DIAG_ROW") format = WeightFormat::LowerDiagRow;
      else if (line.value == "FUNCTION") {}  // weights come from the metric
      else
        fail(ParseErrorKind::UnsupportedKeyword, line,
             "unsupported EDGE_WEIGHT_FORMAT '" + line.value + "'");
      ++idx;
    } else if (key == "NODE_COORD_SECTION") {
      if (dimension < 0) fail(ParseErrorKind::MissingSection, line, "NODE_COORD_SECTION before DIMENSION");
      ++idx;
      inst.xs.assign(dimension, 0.0);
      inst.ys.assign(dimension, 0.0);
      std::vector<bool> seen(dimension, false);
      int read = 0;
      while (read < dimension && idx < lines.size() && lines[idx].keyword.empty()) {
        const Line& row = lines[idx];
        std::string t = trim(row.raw);
        if (t.empty()) {
          ++idx;
          continue;
        }
        std::istringstream ls(t);
        long id;
        double x, y;
        if (!(ls >> id >> x >> y))
          fail(ParseErrorKind::MalformedValue, row, "malformed coordinate row '" + t + "'");
        if (id < 1 || id > dimension)
          fail(ParseErrorKind::DimensionMismatch, row,
               "coordinate index " + std::to_string(id) + " outside 1.." +
                   std::to_string(dimension));
        if (seen[id - 1])
          fail(ParseErrorKind::MalformedValue, row, "duplicate coordinate index " + std::to_string(id));
        seen[id - 1] = true;
        inst.xs[id - 1] = x;
        inst.ys[id - 1] = y;
        ++read;
        ++idx;
      }
      if (read < dimension) {
        const Line& at = idx < lines.size() ? lines[idx] : lines.back();
        fail(ParseErrorKind::DimensionMismatch, at,
             "NODE_COORD_SECTION has " + std::to_string(read) + " rows, DIMENSION is " +
                 std::to_string(dimension));
      }
      saw_coords = true;
    } else if (key == "EDGE_WEIGHT_SECTION") {
      if (dimension < 0) fail(ParseErrorKind::MissingSection, line, "EDGE_WEIGHT_SECTION before DIMENSION");
      if (!format) fail(ParseErrorKind::MissingSection, line, "EDGE_WEIGHT_SECTION without EDGE_WEIGHT_FORMAT");
      ++idx;
      size_t count = 0;
      size_t nn = static_cast<size_t>(dimension);
      switch (*format) {
        case WeightFormat::FullMatrix: count = nn * nn; break;
        case WeightFormat::UpperRow: count = nn * (nn - 1) / 2; break;
        case WeightFormat::LowerDiagRow: count = nn * (nn + 1) / 2; break;
      }
      std::vector<double> vals = read_numbers(lines, idx, count, "EDGE_WEIGHT_SECTION");
      std::vector<Length> m(nn * nn, 0);
      size_t k = 0;
      switch (*format) {
        case WeightFormat::FullMatrix:
          for (size_t i = 0; i < nn; ++i)
            for (size_t j = 0; j < nn; ++j) m[i * nn + j] = static_cast<Length>(vals[k++]);
          break;
        case WeightFormat::UpperRow:
          for (size_t i = 0; i < nn; ++i)
            for (size_t j = i + 1; j < nn; ++j) {
              m[i * nn + j] = static_cast<Length>(vals[k++]);
              m[j * nn + i] = m[i * nn + j];
            }
          break;
        case WeightFormat::LowerDiagRow:
          for (size_t i = 0; i < nn; ++i)
            for (size_t j = 0; j <= i; ++j) {
              m[i * nn + j] = static_cast<Length>(vals[k++]);
              m[j * nn + i] = m[i * nn + j];
            }
          break;
      }
      for (size_t i = 0; i < nn; ++i) m[i * nn + i] = 0;
      // Symmetry check only matters for FULL_MATRIX, the other layouts
      // are symmetric by construction.
      if (*format == WeightFormat::FullMatrix)
        for (size_t i = 0; i < nn; ++i)
          for (size_t j = i + 1; j < nn; ++j)
            if (m[i * nn + j] != m[j * nn + i])
              throw ParseError(ParseErrorKind::MalformedValue, 0,
                               "asymmetric FULL_MATRIX at pair (" + std::to_string(i + 1) +
                                   "," + std::to_string(j + 1) + ")");
      inst.n = dimension;
      inst.set_matrix(std::move(m));
      saw_weights = true;
    } else if (key == "DISPLAY_DATA_SECTION") {
      ++idx;
      while (idx < lines.size() && lines[idx].keyword.empty()) ++idx;
    } else if (key == "EOF") {
      break;
    } else {
      fail(ParseErrorKind::UnsupportedKeyword, line, "unsupported keyword '" + key + "'");
    }
  }

  if (dimension < 0)
    throw ParseError(ParseErrorKind::MissingSection, 0, "missing DIMENSION");
  if (!metric)
    throw ParseError(ParseErrorKind::MissingSection, 0, "missing EDGE_WEIGHT_TYPE");
  inst.metric = *metric;
  if (inst.metric == Metric::Explicit) {
    if (!saw_weights)
      throw ParseError(ParseErrorKind::MissingSection, 0,
                       "EXPLICIT instance without EDGE_WEIGHT_SECTION");
  } else {
    if (!saw_coords)
      throw ParseError(ParseErrorKind::MissingSection, 0,
                       std::string(metric_name(inst.metric)) +
                           " instance without NODE_COORD_SECTION");
    inst.finalize();
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  Instance inst = parse_instance(ss.str());
  if (inst.name.empty()) inst.name = path;
  return inst;
}

TourFile parse_tour(const std::string& text) {
  std::vector<Line> lines = split_lines(text);
  TourFile tour;
  int dimension = -1;
  size_t idx = 0;
  bool in_section = false;
  while (idx < lines.size()) {
    const Line& line = lines[idx];
    if (!in_section) {
      const std::string& key = line.keyword;
      if (key == "NAME") tour.name = line.value;
      else if (key == "TYPE") {
        if (line.value != "TOUR")
          fail(ParseErrorKind::UnsupportedKeyword, line, "TYPE must be TOUR");
      } else if (key == "DIMENSION") {
        dimension = std::stoi(line.value);
      } else if (key == "TOUR_SECTION") {
        in_section = true;
      } else if (key == "COMMENT" || key.empty()) {
        // skip
      } else if (key == "EOF") {
        break;
      } else {
        fail(ParseErrorKind::UnsupportedKeyword, line, "unsupported keyword '" + key + "'");
      }
      ++idx;
      continue;
    }
    if (line.keyword == "EOF") break;
    std::istringstream ls(line.raw);
    long v;
    while (ls >> v) {
      if (v == -1) goto done;
      tour.permutation.push_back(static_cast<int>(v) - 1);
    }
    ++idx;
  }
done:
  if (tour.permutation.empty())
    throw ParseError(ParseErrorKind::MissingSection, 0, "empty or missing TOUR_SECTION");
  int n = static_cast<int>(tour.permutation.size());
  if (dimension >= 0 && dimension != n)
    throw ParseError(ParseErrorKind::DimensionMismatch, 0,
                     "TOUR_SECTION has " + std::to_string(n) + " cities, DIMENSION is " +
                         std::to_string(dimension));
  std::vector<bool> seen(n, false);
  for (int c : tour.permutation) {
    if (c < 0 || c >= n || seen[c])
      throw ParseError(ParseErrorKind::BadPermutation, 0,
                       "tour is not a permutation of 1.." + std::to_string(n));
    seen[c] = true;
  }
  return tour;
}

TourFile load_tour(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tour file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tour(ss.str());
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream out;
  out << "NAME: " << inst.name << "\n";
  out << "TYPE: TSP\n";
  out << "DIMENSION: " << inst.n << "\n";
  if (inst.metric == Metric::Explicit) {
    out << "EDGE_WEIGHT_TYPE: EXPLICIT\n";
    out << "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n";
    out << "EDGE_WEIGHT_SECTION\n";
    for (int i = 0; i < inst.n; ++i) {
      for (int j = 0; j < inst.n; ++j) {
        if (j) out << ' ';
        out << inst.dist(i, j);
      }
      out << "\n";
    }
  } else {
    out << "EDGE_WEIGHT_TYPE: " << metric_name(inst.metric) << "\n";
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i < inst.n; ++i)
      out << (i + 1) << ' ' << format_coord(inst.xs[i]) << ' '
          << format_coord(inst.ys[i]) << "\n";
  }
  out << "EOF\n";
  return out.str();
}

std::string serialize_tour(const std::string& name, const std::vector<int>& permutation) {
  std::ostringstream out;
  out << "NAME: " << name << "\n";
  out << "TYPE: TOUR\n";
  out << "DIMENSION: " << permutation.size() << "\n";
  out << "TOUR_SECTION\n";
  for (int c : permutation) out << (c + 1) << "\n";
  out << "-1\nEOF\n";
  return out.str();
}

void write_tour_file(const std::string& path, const std::string& name,
                     const std::vector<int>& permutation) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write tour file: " + path);
  out << serialize_tour(name, permutation);
}

Length tour_length(const Instance& inst, const std::vector<int>& permutation) {
  Length total = 0;
  int n = static_cast<int>(permutation.size());
  for (int i = 0; i < n; ++i) total += inst.dist(permutation[i], permutation[(i + 1) % n]);
  return total;
}

}  // namespace tsp
