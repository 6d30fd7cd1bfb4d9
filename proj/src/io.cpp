#include "graphrec/io.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace graphrec {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  const char* b = s.data();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_int(const std::string& s, long long& v) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  return out;
}

bool blank(const std::string& line) { return trim(line).empty(); }

}  // namespace

GraphFile parse_graph_csv(std::istream& in, const std::string& name, int n, Field field) {
  std::string line;
  int lineno = 0;
  bool header = false;
  struct Row {
    long long i, j;
    cplx w;
    int line;
  };
  std::vector<Row> rows;
  long long max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto cells = split(line, ',');
    if (!header) {
      if (cells != std::vector<std::string>{"i", "j", "re", "im"})
        fail(name, lineno, "expected header i,j,re,im");
      header = true;
      continue;
    }
    if (cells.size() != 4) fail(name, lineno, "expected 4 fields, got " + std::to_string(cells.size()));
    Row r{};
    double re = 0, im = 0;
    if (!parse_int(cells[0], r.i) || !parse_int(cells[1], r.j))
      fail(name, lineno, "node indices must be integers");
    if (!parse_double(cells[2], re) || !parse_double(cells[3], im))
      fail(name, lineno, "re and im must be numbers");
    if (r.i < 1 || r.j < 1) fail(name, lineno, "node indices are 1-based");
    if (n > 0 && (r.i > n || r.j > n))
      fail(name, lineno, "node index exceeds n = " + std::to_string(n));
    if (r.i == r.j) fail(name, lineno, "self-loop");
    r.w = field == Field::Real ? cplx(re, 0.0) : cplx(re, im);
    r.line = lineno;
    max_index = std::max({max_index, r.i, r.j});
    rows.push_back(r);
  }
  if (!header) fail(name, lineno, "missing header i,j,re,im");
  const int nodes = n > 0 ? n : static_cast<int>(std::max<long long>(max_index, 1));
  GraphFile out;
  std::vector<Edge> edges;
  for (const auto& r : rows) {
    int a = static_cast<int>(std::min(r.i, r.j)) - 1;
    int b = static_cast<int>(std::max(r.i, r.j)) - 1;
    if (!out.weights.emplace(std::make_pair(a, b), r.w).second)
      fail(name, r.line, "duplicate edge");
    edges.push_back({a, b});
  }
  out.graph = Graph(nodes, std::move(edges));
  return out;
}

GraphFile read_graph_csv(const std::string& path, int n, Field field) {
  auto in = open_in(path);
  return parse_graph_csv(in, path, n, field);
}

void write_graph_csv(const std::string& path, const GraphMatrix& y) {
  auto out = open_out(path);
  out << "i,j,re,im\n";
  const Graph g = y.graph();
  for (const auto& e : g.edges()) {
    cplx w = y(e.i, e.j);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", e.i + 1, e.j + 1, w.real(), w.imag());
    out << buf;
  }
}

void write_graph_csv(const std::string& path, const Graph& g) {
  auto out = open_out(path);
  out << "i,j,re,im\n";
  for (const auto& e : g.edges()) out << e.i + 1 << ',' << e.j + 1 << ",1,0\n";
}

std::string format_entry(cplx v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g", v.real(), v.imag());
  return buf;
}

cplx parse_entry(const std::string& token) {
  auto colon = token.find(':');
  double re = 0, im = 0;
  if (colon == std::string::npos) {
    if (!parse_double(trim(token), re)) throw ParseError("bad entry '" + token + "'");
    return {re, 0.0};
  }
  if (!parse_double(trim(token.substr(0, colon)), re) ||
      !parse_double(trim(token.substr(colon + 1)), im))
    throw ParseError("bad entry '" + token + "'");
  return {re, im};
}

CMatrix parse_matrix_csv(std::istream& in, const std::string& name) {
  std::vector<std::vector<cplx>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    std::vector<cplx> row;
    for (const auto& cell : split(line, ',')) {
      try {
        row.push_back(parse_entry(cell));
      } catch (const ParseError& e) {
        fail(name, lineno, e.what());
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(name, lineno, "row has " + std::to_string(row.size()) + " entries, expected " +
                             std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(name, lineno, "empty matrix");
  CMatrix x(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c) x(r, c) = rows[r][c];
  return x;
}

CMatrix read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  return parse_matrix_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const CMatrix& x) {
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c) {
      if (c) out << ',';
      out << format_entry(x(r, c));
    }
    out << '\n';
  }
}

void write_matrix_csv(const std::string& path, const CMatrix& x) {
  auto out = open_out(path);
  write_matrix_csv(out, x);
}

Manifest read_manifest(const std::string& path) {
  auto in = open_in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    // byte offset is all the parser reports; map it to a line
    std::ifstream again(path);
    std::string text((std::istreambuf_iterator<char>(again)), std::istreambuf_iterator<char>());
    int line = 1;
    for (std::size_t k = 0; k < std::min<std::size_t>(e.byte, text.size()); ++k)
      if (text[k] == '\n') ++line;
    fail(path, line, "invalid JSON");
  }
  Manifest m;
  try {
    m.m = j.at("m").get<Index>();
    m.n = j.at("n").get<Index>();
    m.field = field_from_string(j.at("field").get<std::string>());
    m.sigma_S = j.value("sigma_S", 1.0);
    m.sigma_N = j.value("sigma_N", 0.0);
    m.seed = j.value("seed", std::uint64_t{0});
    m.B_path = j.at("B").get<std::string>();
    m.A_path = j.at("A").get<std::string>();
    if (j.contains("Y")) m.Y_path = j.at("Y").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ":1: " + e.what());
  }
  if (m.m < 1 || m.n < 1) throw ParseError(path + ":1: m and n must be positive");
  return m;
}

void write_manifest(const std::string& path, const Manifest& m) {
  nlohmann::ordered_json j{{"m", m.m},           {"n", m.n},
                           {"field", to_string(m.field)}, {"sigma_S", m.sigma_S},
                           {"sigma_N", m.sigma_N}, {"seed", m.seed},
                           {"B", m.B_path},       {"A", m.A_path}};
  if (m.Y_path) j["Y"] = *m.Y_path;
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

Ingested ingest(const std::string& manifest_path) {
  Ingested result;
  result.manifest = read_manifest(manifest_path);
  const auto& man = result.manifest;
  const fs::path base = fs::path(manifest_path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path q(p);
    return (q.is_absolute() ? q : base / q).string();
  };
  auto check_shape = [&](const CMatrix& x, Index rows, Index cols, const std::string& what) {
    if (x.rows() != rows || x.cols() != cols)
      throw ShapeError(what + " is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                       ", manifest declares " + std::to_string(rows) + "x" + std::to_string(cols));
  };
  auto check_field = [&](const CMatrix& x, const std::string& what) {
    if (man.field == Field::Real && x.imag().cwiseAbs().maxCoeff() != 0.0)
      throw ConfigError(what + " has imaginary parts but the manifest field is real");
  };
  result.ms.B = read_matrix_csv(resolve(man.B_path));
  result.ms.A = read_matrix_csv(resolve(man.A_path));
  check_shape(result.ms.B, man.m, man.n, "B");
  check_shape(result.ms.A, man.m, man.n, "A");
  check_field(result.ms.B, "B");
  check_field(result.ms.A, "A");
  result.ms.field = man.field;
  result.ms.sigma_S = man.sigma_S;
  result.ms.sigma_N = man.sigma_N;
  result.ms.validate(true);
  if (man.Y_path) {
    CMatrix y = read_matrix_csv(resolve(*man.Y_path));
    check_shape(y, man.n, man.n, "Y");
    result.truth = GraphMatrix(std::move(y), man.field);
  }
  return result;
}

std::string emit_measurements(const std::string& dir, const MeasurementSet& ms, std::uint64_t seed,
                              const GraphMatrix* truth) {
  fs::create_directories(dir);
  const fs::path base(dir);
  write_matrix_csv((base / "B.csv").string(), ms.B);
  write_matrix_csv((base / "A.csv").string(), ms.A);
  Manifest man;
  man.m = ms.m();
  man.n = ms.n();
  man.field = ms.field;
  man.sigma_S = ms.sigma_S;
  man.sigma_N = ms.sigma_N;
  man.seed = seed;
  man.B_path = "B.csv";
  man.A_path = "A.csv";
  if (truth) {
    write_matrix_csv((base / "Y.csv").string(), truth->values());
    man.Y_path = "Y.csv";
  }
  const std::string path = (base / "manifest.json").string();
  write_manifest(path, man);
  return path;
}

}  // namespace graphrec
