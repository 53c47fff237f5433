#ifndef MHREV_CHAIN_FILE_HPP
#define MHREV_CHAIN_FILE_HPP

#include "mhrev/types.hpp"

#include <iosfwd>
#include <optional>

namespace mhrev {

/// On-disk chain description: a plain UTF-8 text document with keys
/// `states` (optional labels), `rates` (row-major matrix, one row per
/// line) and `target` (optional probability vector). Lines starting with
/// '#' are comments. Numbers are serialized as decimal strings at 17
/// significant digits, so write/parse round-trips are bit-exact.
struct ChainFile {
  std::vector<std::string> states;
  Eigen::MatrixXd rates;
  std::optional<Eigen::VectorXd> target;
  std::vector<std::string> warnings;  // e.g. target renormalized
};

ChainFile parse_chain_file(std::istream& in);
ChainFile load_chain_file(const std::string& path);

void write_chain_file(std::ostream& out, const ChainFile& file,
                      const std::vector<std::string>& comments = {});

/// Canonical decimal form (17 significant digits).
std::string format_number(double value);

/// Parses `spec` as an inline vector ("0.5,0.5" or space separated); if it
/// is not fully numeric, treats it as a path to a whitespace-separated
/// vector file (a leading `target:` key is accepted).
Eigen::VectorXd parse_vector_spec(const std::string& spec);

}  // namespace mhrev

#endif
