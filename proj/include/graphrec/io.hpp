#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "graphrec/graph.hpp"
#include "graphrec/measurement.hpp"

namespace graphrec {

// File formats. Node indices are 1-based on disk and 0-based in memory.
//
//   graph CSV   header "i,j,re,im", one edge per row
//   matrix CSV  one row per line, entries "re:im" printed with 17 significant
//               digits so that doubles round-trip exactly
//   manifest    JSON naming the B and A matrix files plus m, n, field,
//               sigma_S, sigma_N and seed
//
// Malformed input raises ParseError with "file:line:" in the message.

struct GraphFile {
  Graph graph;
  LineAdmittances weights;  // 0-based (i, j), i < j
};

/// `n` = 0 infers the node count from the largest index.
GraphFile read_graph_csv(const std::string& path, int n = 0, Field field = Field::Complex);
GraphFile parse_graph_csv(std::istream& in, const std::string& name, int n = 0,
                          Field field = Field::Complex);
/// Writes the off-diagonal support of `y` with the entries Y_ij as weights.
void write_graph_csv(const std::string& path, const GraphMatrix& y);
/// Unit weights.
void write_graph_csv(const std::string& path, const Graph& g);

std::string format_entry(cplx v);
cplx parse_entry(const std::string& token);

CMatrix read_matrix_csv(const std::string& path);
CMatrix parse_matrix_csv(std::istream& in, const std::string& name);
void write_matrix_csv(const std::string& path, const CMatrix& x);
void write_matrix_csv(std::ostream& out, const CMatrix& x);

struct Manifest {
  Index m = 0;
  Index n = 0;
  Field field = Field::Real;
  double sigma_S = 1.0;
  double sigma_N = 0.0;
  std::uint64_t seed = 0;
  std::string B_path;  // relative paths resolve against the manifest directory
  std::string A_path;
  std::optional<std::string> Y_path;
};

Manifest read_manifest(const std::string& path);
void write_manifest(const std::string& path, const Manifest& manifest);

struct Ingested {
  MeasurementSet ms;
  Manifest manifest;
  std::optional<GraphMatrix> truth;  // when the manifest names Y
};

/// Loads and validates a measurement manifest: shapes must match the
/// declared m and n and real-field data must have zero imaginary parts.
Ingested ingest(const std::string& manifest_path);

/// Writes <dir>/B.csv, <dir>/A.csv, optionally <dir>/Y.csv, and
/// <dir>/manifest.json. Returns the manifest path.
std::string emit_measurements(const std::string& dir, const MeasurementSet& ms, std::uint64_t seed,
                              const GraphMatrix* truth = nullptr);

}  // namespace graphrec
