#include "fso/error.hpp"
#include "fso/scenario.hpp"

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <string>

namespace fso {

namespace {

constexpr const char* kHeader = "snr_db,ber_closed,ber_mc,mc_halfwidth_95";

std::string field(double v) { return fmt::format("{:.16e}", v); }

std::string field(const std::optional<double>& v) { return v ? field(*v) : std::string(); }

std::optional<double> parse_field(const std::string& text, std::size_t line_no) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw DomainError(fmt::format("csv line {}: bad number '{}'", line_no, text));
  }
  return value;
}

}  // namespace

void write_csv(std::ostream& out, const SweepResult& result) {
  for (const auto& [key, value] : result.metadata) out << "# " << key << " = " << value << '\n';
  out << kHeader << '\n';
  for (const BerPoint& p : result.points) {
    out << field(p.snr_db) << ',' << field(p.ber_closed) << ',' << field(p.ber_mc) << ','
        << field(p.mc_halfwidth) << '\n';
  }
}

SweepResult read_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto sep = line.find(" = ");
      if (line.size() < 2 || sep == std::string::npos) {
        throw DomainError(fmt::format("csv line {}: malformed metadata", line_no));
      }
      result.metadata.emplace_back(line.substr(2, sep - 2), line.substr(sep + 3));
      continue;
    }
    if (!header_seen) {
      if (line != kHeader) throw DomainError(fmt::format("csv line {}: unexpected header", line_no));
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cells.size() != 4) throw DomainError(fmt::format("csv line {}: expected 4 fields", line_no));
    BerPoint p;
    p.snr_db = parse_field(cells[0], line_no).value_or(0.0);
    p.ber_closed = parse_field(cells[1], line_no).value_or(0.0);
    p.ber_mc = parse_field(cells[2], line_no);
    p.mc_halfwidth = parse_field(cells[3], line_no);
    if (p.ber_mc.has_value() != p.mc_halfwidth.has_value()) {
      throw DomainError(fmt::format("csv line {}: MC columns must be both present or both empty", line_no));
    }
    result.points.push_back(p);
  }
  if (!header_seen) throw DomainError("csv: missing header");
  return result;
}

void write_series(std::ostream& out, const std::string& label,
                  const std::vector<std::pair<double, double>>& xy) {
  out << "# series = " << label << '\n' << "x,y\n";
  for (const auto& [x, y] : xy) out << field(x) << ',' << field(y) << '\n';
}

}  // namespace fso
