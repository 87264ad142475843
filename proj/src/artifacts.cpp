#include "knrspec/artifacts.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <system_error>

namespace knrspec {
namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path.string());
  }
}

std::string spectrum_csv(const Spectrum& spectrum) {
  if (spectrum.points.empty()) throw std::invalid_argument("spectrum_csv: empty spectrum");
  std::string out = "delta_mhz,p_e\n";
  for (const auto& p : spectrum.points)
    out += fmt("%.9g", rad_per_us_to_mhz(p.delta)) + "," + fmt("%.12e", p.p_e) + "\n";
  return out;
}

void write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  write_file_atomic(path, spectrum_csv(spectrum));
}

std::string plot_svg(const Spectrum& spectrum, const PeakSet& peaks,
                     std::span<const TransitionRow> table) {
  if (spectrum.points.empty()) throw std::invalid_argument("plot_svg: empty spectrum");
  constexpr double W = 800, H = 500, L = 80, R = 30, T = 30, B = 60;
  const double x0 = rad_per_us_to_mhz(spectrum.points.front().delta);
  const double x1 = rad_per_us_to_mhz(spectrum.points.back().delta);
  double y0 = spectrum.points.front().p_e, y1 = y0;
  for (const auto& p : spectrum.points) {
    y0 = std::min(y0, p.p_e);
    y1 = std::max(y1, p.p_e);
  }
  y0 = std::min(y0, 0.0);
  if (y1 - y0 <= 0.0) y1 = y0 + 1.0;
  y1 += 0.08 * (y1 - y0);
  const double xspan = x1 > x0 ? x1 - x0 : 1.0;
  auto X = [&](double mhz) { return L + (mhz - x0) / xspan * (W - L - R); };
  auto Y = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<g id=\"axes\" stroke=\"black\" fill=\"none\">\n"
    << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
    << H - T - B << "\"/>\n</g>\n";

  s << "<g id=\"ticks\" fill=\"black\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + i * xspan / 4, yv = y0 + i * (y1 - y0) / 4;
    s << "<text x=\"" << fmt("%.2f", X(xv)) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\">" << fmt("%.3g", xv) << "</text>\n"
      << "<text x=\"" << L - 6 << "\" y=\"" << fmt("%.2f", Y(yv) + 4)
      << "\" text-anchor=\"end\">" << fmt("%.2e", yv) << "</text>\n";
  }
  s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15
    << "\" text-anchor=\"middle\">detuning (MHz)</text>\n"
    << "<text x=\"20\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
    << (T + H - B) / 2 << ")\">P_e</text>\n</g>\n";

  s << "<g id=\"transitions\" stroke=\"gray\" stroke-dasharray=\"4 3\">\n";
  int n_label = 0;
  for (const auto& row : table) {
    const double e = rad_per_us_to_mhz(row.energy);
    if (e < std::min(x0, x1) || e > std::max(x0, x1)) continue;
    const double x = X(e);
    s << "<line x1=\"" << fmt("%.2f", x) << "\" y1=\"" << T << "\" x2=\"" << fmt("%.2f", x)
      << "\" y2=\"" << H - B << "\"><title>" << row.label() << "</title></line>\n"
      << "<text x=\"" << fmt("%.2f", x + 3) << "\" y=\"" << T + 12 + 12 * (n_label++ % 2)
      << "\" stroke=\"none\" fill=\"gray\">" << xml_escape(row.label()) << "</text>\n";
  }
  s << "</g>\n";

  s << "<polyline id=\"spectrum\" fill=\"none\" stroke=\"navy\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < spectrum.points.size(); ++i) {
    const auto& p = spectrum.points[i];
    s << (i ? " " : "") << fmt("%.2f", X(rad_per_us_to_mhz(p.delta))) << ","
      << fmt("%.2f", Y(p.p_e));
  }
  s << "\"/>\n";

  s << "<g id=\"peaks\" fill=\"crimson\">\n";
  for (const auto& pk : peaks.peaks) {
    const double mhz = rad_per_us_to_mhz(pk.delta);
    s << "<circle cx=\"" << fmt("%.2f", X(mhz)) << "\" cy=\"" << fmt("%.2f", Y(pk.height))
      << "\" r=\"4\"><title>" << fmt("%.4f", mhz) << " MHz"
      << (pk.assigned.empty() ? "" : " " + xml_escape(join(pk.assigned, "+")))
      << "</title></circle>\n";
  }
  s << "</g>\n</svg>\n";
  return s.str();
}

void render_plot(const Spectrum& spectrum, const PeakSet& peaks,
                 std::span<const TransitionRow> table, const std::filesystem::path& path) {
  write_file_atomic(path, plot_svg(spectrum, peaks, table));
}

std::string transition_table_text(std::span<const TransitionRow> table) {
  std::string out = "transition,energy_mhz,sigma_x_re,sigma_x_im,drive_abs_mhz\n";
  for (const auto& r : table)
    out += r.label() + "," + fmt("%.9g", rad_per_us_to_mhz(r.energy)) + "," +
           fmt("%.9g", r.sigma_x_element.real()) + "," + fmt("%.9g", r.sigma_x_element.imag()) +
           "," + fmt("%.9g", rad_per_us_to_mhz(std::abs(r.drive_element))) + "\n";
  return out;
}

std::string peak_report_text(const PeakSet& peaks) {
  std::string out = "delta_mhz,height,prominence,assigned,assignment_error_mhz\n";
  for (const auto& p : peaks.peaks) {
    out += fmt("%.9g", rad_per_us_to_mhz(p.delta)) + "," + fmt("%.9g", p.height) + "," +
           fmt("%.9g", p.prominence) + "," + join(p.assigned, "+") + ",";
    if (!p.assigned.empty()) out += fmt("%.9g", rad_per_us_to_mhz(p.assignment_error));
    out += "\n";
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["config_sha256"] = config_hash;
  j["version"] = version;
  j["wall_clock_seconds"] = wall_clock_seconds;
  nlohmann::ordered_json arts = nlohmann::ordered_json::object();
  for (const auto& a : artifacts) arts[a.name] = a.sha256;
  j["artifacts"] = arts;
  return j.dump(2) + "\n";
}

std::string tool_version() { return KNRSPEC_VERSION; }

}  // namespace knrspec
