#include "mhrev/chain_file.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mhrev {

namespace {

std::string trim(const std::string& s) {
  size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + token.size() && token.size() > 0 && std::isfinite(out);
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream stream(line);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

std::vector<double> parse_numbers(const std::string& line, const std::string& where) {
  std::vector<double> values;
  for (const std::string& token : split_tokens(line)) {
    double v = 0.0;
    if (!parse_double(token, v))
      throw Error(ErrorKind::ParseError, where + ": bad number '" + token + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace

ChainFile parse_chain_file(std::istream& in) {
  ChainFile file;
  std::vector<std::vector<double>> rows;
  Eigen::Index expected_rows = -1;
  bool in_rates = false;
  bool saw_rates = false;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::string where = "line " + std::to_string(line_no);

    if (line.rfind("states:", 0) == 0) {
      file.states = split_tokens(line.substr(7));
      in_rates = false;
      continue;
    }
    if (line.rfind("target:", 0) == 0) {
      std::vector<double> values = parse_numbers(line.substr(7), where);
      file.target = Eigen::Map<Eigen::VectorXd>(values.data(),
                                                static_cast<Eigen::Index>(values.size()));
      in_rates = false;
      continue;
    }
    if (line.rfind("rates:", 0) == 0) {
      if (saw_rates) throw Error(ErrorKind::ParseError, where + ": duplicate rates block");
      in_rates = true;
      saw_rates = true;
      continue;
    }
    if (in_rates && (expected_rows < 0 ||
                     static_cast<Eigen::Index>(rows.size()) < expected_rows)) {
      std::vector<double> row =
          parse_numbers(line, "rates row " + std::to_string(rows.size()));
      if (expected_rows < 0) expected_rows = static_cast<Eigen::Index>(row.size());
      if (static_cast<Eigen::Index>(row.size()) != expected_rows)
        throw Error(ErrorKind::ParseError,
                    "rates row " + std::to_string(rows.size()) + ": expected " +
                        std::to_string(expected_rows) + " entries, got " +
                        std::to_string(row.size()));
      rows.push_back(std::move(row));
      continue;
    }
    throw Error(ErrorKind::ParseError, where + ": unrecognized content '" + line + "'");
  }

  if (!saw_rates || rows.empty())
    throw Error(ErrorKind::ParseError, "missing rates block");
  const Eigen::Index n = expected_rows;
  if (static_cast<Eigen::Index>(rows.size()) != n)
    throw Error(ErrorKind::ParseError,
                "expected " + std::to_string(n) + " rate rows, got " +
                    std::to_string(rows.size()));
  file.rates.resize(n, n);
  for (Eigen::Index x = 0; x < n; ++x)
    for (Eigen::Index y = 0; y < n; ++y)
      file.rates(x, y) = rows[static_cast<size_t>(x)][static_cast<size_t>(y)];

  if (!file.states.empty() && static_cast<Eigen::Index>(file.states.size()) != n)
    throw Error(ErrorKind::ParseError, "state label count does not match matrix size");

  if (file.target) {
    Eigen::VectorXd& t = *file.target;
    if (t.size() != n)
      throw Error(ErrorKind::ParseError, "target length does not match matrix size");
    if ((t.array() <= 0.0).any())
      throw Error(ErrorKind::ParseError, "target must be strictly positive");
    double sum = t.sum();
    if (std::abs(sum - 1.0) > 1e-6)
      throw Error(ErrorKind::ParseError,
                  "target sums to " + std::to_string(sum) + ", expected 1");
    if (std::abs(sum - 1.0) > 1e-9) {
      t /= sum;
      file.warnings.push_back("target renormalized (sum deviated by " +
                              std::to_string(sum - 1.0) + ")");
    }
  }
  return file;
}

ChainFile load_chain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  return parse_chain_file(in);
}

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void write_chain_file(std::ostream& out, const ChainFile& file,
                      const std::vector<std::string>& comments) {
  for (const std::string& comment : comments) out << "# " << comment << "\n";
  if (!file.states.empty()) {
    out << "states:";
    for (const std::string& label : file.states) out << ' ' << label;
    out << "\n";
  }
  out << "rates:\n";
  for (Eigen::Index x = 0; x < file.rates.rows(); ++x) {
    for (Eigen::Index y = 0; y < file.rates.cols(); ++y)
      out << (y == 0 ? "" : " ") << format_number(file.rates(x, y));
    out << "\n";
  }
  if (file.target) {
    out << "target:";
    for (Eigen::Index x = 0; x < file.target->size(); ++x)
      out << ' ' << format_number((*file.target)(x));
    out << "\n";
  }
}

Eigen::VectorXd parse_vector_spec(const std::string& spec) {
  // Inline form first: comma or space separated numbers.
  std::string normalized = spec;
  for (char& c : normalized)
    if (c == ',') c = ' ';
  std::vector<std::string> tokens = split_tokens(normalized);
  bool numeric = !tokens.empty();
  std::vector<double> values;
  for (const std::string& token : tokens) {
    double v = 0.0;
    if (!parse_double(token, v)) {
      numeric = false;
      break;
    }
    values.push_back(v);
  }
  if (numeric && values.size() >= 2)
    return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));

  std::ifstream in(spec);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open vector file '" + spec + "'");
  std::stringstream contents;
  contents << in.rdbuf();
  std::string text = contents.str();
  // Strip an optional leading key and comment lines.
  std::istringstream lines(text);
  std::string cleaned;
  std::string line;
  while (std::getline(lines, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("target:", 0) == 0) line = line.substr(7);
    cleaned += line + " ";
  }
  values = parse_numbers(cleaned, "vector file '" + spec + "'");
  if (values.empty())
    throw Error(ErrorKind::ParseError, "vector file '" + spec + "' is empty");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace mhrev
