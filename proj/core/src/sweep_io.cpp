#include "rdwkit/error.hpp"
#include "rdwkit/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rdwkit {

namespace {

std::string fmt(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw Error(ErrorCode::InvalidArgument,
                "line " + std::to_string(line_no) + ": cannot parse number '" + text + "'");
  }
  return value;
}

constexpr std::string_view kSweepHeader = "p1,p2,eta,a_rdw,rho_max,center_rho,center_z,mask_reason";

}  // namespace

void write_sweep_csv(std::ostream& out, const EtaField& field) {
  out << kSweepHeader << '\n';
  for (const auto& cell : field.cells) {
    out << fmt(cell.p1, 6) << ',' << fmt(cell.p2, 6) << ',';
    if (cell.valid()) {
      out << fmt(cell.eta, 6) << ',' << fmt(cell.a_rdw, 6) << ',' << fmt(cell.rho_max, 6) << ','
          << fmt(cell.center.rho, 6) << ',' << fmt(cell.center.z, 6) << ",\n";
    } else {
      out << ",,,,," << cell.mask_reason << '\n';
    }
  }
}

EtaField read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "empty sweep CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepHeader) {
    throw Error(ErrorCode::InvalidArgument,
                "sweep CSV header must be '" + std::string(kSweepHeader) + "'");
  }

  EtaField field;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 8) {
      throw Error(ErrorCode::InvalidArgument,
                  "line " + std::to_string(line_no) + ": expected 8 columns");
    }
    EtaCell cell;
    cell.p1 = parse_double(cols[0], line_no);
    cell.p2 = parse_double(cols[1], line_no);
    cell.mask_reason = cols[7];
    if (cell.valid()) {
      cell.eta = parse_double(cols[2], line_no);
      cell.a_rdw = parse_double(cols[3], line_no);
      cell.rho_max = parse_double(cols[4], line_no);
      cell.center = {parse_double(cols[5], line_no), parse_double(cols[6], line_no)};
    }
    if (field.p1_values.empty() || field.p1_values.back() != cell.p1) {
      field.p1_values.push_back(cell.p1);
    }
    if (field.p1_values.size() == 1) field.p2_values.push_back(cell.p2);
    field.cells.push_back(std::move(cell));
  }

  const std::size_t rows = field.p1_values.size(), cols = field.p2_values.size();
  if (rows * cols != field.cells.size()) {
    throw Error(ErrorCode::InvalidArgument, "sweep CSV is not a complete row-major grid");
  }
  for (std::size_t k = 0; k < field.cells.size(); ++k) {
    const EtaCell& cell = field.cells[k];
    if (cell.p1 != field.p1_values[k / cols] || cell.p2 != field.p2_values[k % cols]) {
      throw Error(ErrorCode::InvalidArgument, "sweep CSV is not a complete row-major grid");
    }
  }
  return field;
}

void write_contour_csv(std::ostream& out, const ContourSet& contours) {
  out << "level,poly_id,p1,p2\n";
  std::size_t poly_id = 0;
  for (const auto& contour : contours.contours) {
    for (const auto& line : contour.polylines) {
      for (const auto& p : line) {
        out << fmt(contour.level, 6) << ',' << poly_id << ',' << fmt(p.p1, 6) << ','
            << fmt(p.p2, 6) << '\n';
      }
      ++poly_id;
    }
  }
}

void write_contour_svg(std::ostream& out, const ContourSet& contours, const EtaField& field) {
  constexpr double kSize = 800.0;
  constexpr std::array<std::string_view, 8> kPalette{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                     "#9467bd", "#8c564b", "#e377c2", "#17becf"};
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (!field.p1_values.empty() && !field.p2_values.empty()) {
    x0 = field.p1_values.front();
    x1 = field.p1_values.back();
    y0 = field.p2_values.front();
    y1 = field.p2_values.back();
  }
  const double sx = x1 > x0 ? kSize / (x1 - x0) : 1.0;
  const double sy = y1 > y0 ? kSize / (y1 - y0) : 1.0;
  auto px = [&](double p1) { return fmt((p1 - x0) * sx, 7); };
  auto py = [&](double p2) { return fmt(kSize - (p2 - y0) * sy, 7); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\" stroke=\"black\"/>\n";
  for (std::size_t c = 0; c < contours.contours.size(); ++c) {
    const auto& contour = contours.contours[c];
    const auto colour = kPalette[c % kPalette.size()];
    for (const auto& line : contour.polylines) {
      if (line.empty()) continue;
      out << "<path fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" d=\"";
      for (std::size_t k = 0; k < line.size(); ++k) {
        out << (k == 0 ? "M" : " L") << px(line[k].p1) << ' ' << py(line[k].p2);
      }
      out << "\"/>\n";
      out << "<text x=\"" << px(line.front().p1) << "\" y=\"" << py(line.front().p2)
          << "\" font-size=\"14\" fill=\"" << colour << "\">" << fmt(contour.level, 6)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

void write_singular_csv(std::ostream& out, const SingularSampleSet& samples) {
  out << "rho,z,theta2,theta3\n";
  for (std::size_t k = 0; k < samples.size(); ++k) {
    out << fmt(samples.points[k].rho, 9) << ',' << fmt(samples.points[k].z, 9) << ','
        << fmt(samples.preimages[k][0], 9) << ',' << fmt(samples.preimages[k][1], 9) << '\n';
  }
}

}  // namespace rdwkit
