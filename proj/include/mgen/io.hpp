#pragma once

#include <span>
#include <string>
#include <vector>

#include "mgen/affine.hpp"
#include "mgen/search.hpp"

namespace mgen {

/// Set file, format 1:
///
///   # free-form comment lines
///   format=1
///   <p^d:modulus-id> <n> <m>
///   <c_1> <c_2> ... <c_n>      one point per line, canonical integers
struct SetFile {
  PointSet set;
  int m = 0;
  std::vector<std::string> comments;
};

std::string point_to_text(const Point& p);
Point point_from_text(const std::string& line);

std::string write_set_file(const SetFile& file);
/// Throws FormatError on malformed text and PreconditionError when points
/// do not fit the declared ambient.
SetFile read_set_file(const std::string& text);

/// JSON with a fixed key order: format, params, witness, value, exact,
/// nodes_explored, prune_bound_used, seed, restarts, method, toolchain,
/// reductions.
std::string certificate_to_json(const SearchCertificate& cert);
/// Throws FormatError on malformed JSON or missing keys, and
/// PreconditionError when the witness does not fit the declared ambient.
SearchCertificate certificate_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace mgen
