#include "ogl/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ogl {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view tok, const std::string& path,
                    size_t line_no) {
  tok = trim(tok);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw InputError(path + ":" + std::to_string(line_no) +
                     ": not a number: '" + std::string(tok) + "'");
  }
  return value;
}

int parse_int(std::string_view tok, const std::string& path, size_t line_no) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw InputError(path + ":" + std::to_string(line_no) +
                     ": not an index: '" + std::string(tok) + "'");
  }
  return value;
}

std::vector<std::vector<double>> load_rows(const std::string& path,
                                           bool skip_header) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      size_t comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), path, line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": row has " + std::to_string(row.size()) +
                       " fields, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw InputError(path + ": no data rows");
  }
  return rows;
}

}  // namespace

Matrix load_matrix_csv(const std::string& path, bool skip_header) {
  auto rows = load_rows(path, skip_header);
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return m;
}

Vector load_vector_csv(const std::string& path, bool skip_header) {
  auto rows = load_rows(path, skip_header);
  if (rows.front().size() != 1) {
    throw InputError(path + ": expected a single column, found " +
                     std::to_string(rows.front().size()));
  }
  Vector v(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = rows[i][0];
  }
  return v;
}

void save_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

void save_vector_csv(const std::string& path, const Vector& v) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << v[i] << '\n';
  }
}

std::vector<std::vector<int>> load_groups(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  std::vector<std::vector<int>> groups;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::vector<int> g;
    std::string tok;
    while (tokens >> tok) {
      size_t dash = tok.find('-', 1);  // position 0 would be a sign
      if (dash == std::string::npos) {
        g.push_back(parse_int(tok, path, line_no));
      } else {
        int a = parse_int(std::string_view(tok).substr(0, dash), path, line_no);
        int b = parse_int(std::string_view(tok).substr(dash + 1), path, line_no);
        if (a > b) {
          throw InputError(path + ":" + std::to_string(line_no) +
                           ": empty range '" + tok + "'");
        }
        for (int j = a; j <= b; ++j) g.push_back(j);
      }
    }
    if (!g.empty()) groups.push_back(std::move(g));
  }
  if (groups.empty()) {
    throw InputError(path + ": no groups");
  }
  return groups;
}

void save_groups(const std::string& path,
                 const std::vector<std::vector<int>>& groups) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  for (std::vector<int> g : groups) {
    std::sort(g.begin(), g.end());
    size_t i = 0;
    bool first = true;
    while (i < g.size()) {
      size_t run = i;
      while (run + 1 < g.size() && g[run + 1] == g[run] + 1) ++run;
      if (!first) out << ' ';
      first = false;
      if (run > i) {
        out << g[i] << '-' << g[run];
      } else {
        out << g[i];
      }
      i = run + 1;
    }
    out << '\n';
  }
}

}  // namespace ogl
