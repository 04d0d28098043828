#include "arden/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "arden/error.hpp"
#include "arden/rng.hpp"

namespace arden {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

double parse_double(std::string_view token, std::size_t row, std::size_t col) {
  double v = 0.0;
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    fail(ErrorKind::ParseError, "row " + std::to_string(row) + ", column " + std::to_string(col) +
                                    ": not a number: '" + std::string(token) + "'");
  }
  return v;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

}  // namespace

TimeSeries parse_csv(std::string_view text, bool has_header) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  bool header_pending = has_header;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (header_pending) {
      for (auto f : fields) names.emplace_back(f);
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) row.push_back(parse_double(fields[c], line_no, c + 1));
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail(ErrorKind::RaggedRows, "row " + std::to_string(line_no) + " has " +
                                      std::to_string(row.size()) + " columns, expected " +
                                      std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorKind::ParseError, "no data rows");
  if (!names.empty() && names.size() != rows.front().size()) {
    fail(ErrorKind::RaggedRows, "header and data column counts differ");
  }

  Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return TimeSeries(std::move(values), std::nullopt, std::move(names));
}

TimeSeries load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), has_header);
}

void write_csv(const std::filesystem::path& path, const Matrix& values,
               const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
    out << '\n';
  }
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_double(values(i, j));
    out << '\n';
  }
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

void write_csv(const std::filesystem::path& path, const TimeSeries& series) {
  write_csv(path, series.values(), series.channel_names());
}

TimeSeries first_difference(const TimeSeries& y) {
  if (y.length() < 2) fail(ErrorKind::HorizonTooShort, "differencing needs at least two steps");
  const Matrix& v = y.values();
  const Eigen::Index n = v.rows() - 1;
  return TimeSeries(v.bottomRows(n) - v.topRows(n), y.sample_rate_hz(), y.channel_names());
}

TimeSeries inject_artefact(const TimeSeries& y, std::size_t channel, std::size_t t_start,
                           std::size_t t_end, double std, std::uint64_t seed) {
  if (channel >= y.channels()) fail(ErrorKind::IndexOutOfRange, "artefact channel");
  if (t_start < 1 || t_start > t_end || t_end > y.length()) {
    fail(ErrorKind::IndexOutOfRange, "artefact window outside [1, N]");
  }
  require(std >= 0.0 && std::isfinite(std), ErrorKind::InvalidArgument,
          "artefact std must be finite and non-negative");
  Matrix v = y.values();
  GaussianRng rng(seed);
  for (std::size_t t = t_start; t <= t_end; ++t) {
    v(static_cast<Eigen::Index>(t - 1), static_cast<Eigen::Index>(channel)) = std * rng.normal();
  }
  return TimeSeries(std::move(v), y.sample_rate_hz(), y.channel_names());
}

// ---------------------------------------------------------------------------
// ExperimentConfig

namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  value = trim(value);
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    fail(ErrorKind::ParseError, "invalid value for '" + std::string(key) + "': '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  fail(ErrorKind::ParseError, "invalid boolean for '" + std::string(key) + "'");
}

}  // namespace

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
  std::string key(trim(raw_key));
  std::replace(key.begin(), key.end(), '-', '_');
  const std::string_view value = trim(raw_value);

  if (key == "command") command = value;
  else if (key == "synthetic") synthetic = value;
  else if (key == "input") input = std::string(value);
  else if (key == "test_input") test_input = std::string(value);
  else if (key == "model") model = std::string(value);
  else if (key == "out_dir") out_dir = std::string(value);
  else if (key == "has_header" || key == "header") has_header = parse_bool(key, value);
  else if (key == "channel") channel = parse_number<std::size_t>(key, value);
  else if (key == "difference") difference = parse_bool(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "order") order = parse_number<std::size_t>(key, value);
  else if (key == "depth") depth = parse_number<std::size_t>(key, value);
  else if (key == "rho") rho = parse_number<double>(key, value);
  else if (key == "lambda") lambda = parse_number<double>(key, value);
  else if (key == "iterations") iterations = parse_number<std::size_t>(key, value);
  else if (key == "tol") tol = parse_number<double>(key, value);
  else if (key == "measure_from_start") measure_from_start = parse_bool(key, value);
  else if (key == "trials") trials = parse_number<std::size_t>(key, value);
  else if (key == "r_min") r_min = parse_number<std::size_t>(key, value);
  else if (key == "r_max") r_max = parse_number<std::size_t>(key, value);
  else if (key == "steps") steps = parse_number<std::size_t>(key, value);
  else if (key == "transition_std") transition_std = parse_number<double>(key, value);
  else if (key == "measurement_std") measurement_std = parse_number<double>(key, value);
  else if (key == "inject") inject = parse_bool(key, value);
  else if (key == "artefact_start") artefact_start = parse_number<std::size_t>(key, value);
  else if (key == "artefact_end") artefact_end = parse_number<std::size_t>(key, value);
  else if (key == "artefact_std") artefact_std = parse_number<double>(key, value);
  else if (key == "artefact_scale") artefact_scale = parse_number<double>(key, value);
  else if (key == "train_steps") train_steps = parse_number<std::size_t>(key, value);
  else fail(ErrorKind::ParseError, "unknown config key '" + key + "'");
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open config " + path.string());
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorKind::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
    }
    config.set(view.substr(0, eq), view.substr(eq + 1));
  }
  return config;
}

}  // namespace arden
