#include "knrspec/config.hpp"

#include "knrspec/errors.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace knrspec {
namespace {

struct Entry {
  std::string value;
  int line = 0;
  int key_col = 0;
  int value_col = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"", {"units"}},
      {"frequencies", {"omega", "omega_tilde", "omega_rot", "omega_drive", "kerr"}},
      {"couplings", {"g", "J12", "J13", "J14", "J23", "J24", "J34"}},
      {"drive", {"lambda", "lambda_probe", "lambda_drive"}},
      {"dissipation", {"gamma"}},
      {"sweep",
       {"delta_min", "delta_max", "n_points", "duration", "observable_mode", "initial_state",
        "peak_prominence", "merge_radius", "assign_tolerance"}},
      {"solver", {"method", "dt_max", "rel_tol", "abs_tol", "record_stride", "threads"}},
      {"output", {"directory", "csv", "svg", "transitions", "peaks"}},
  };
  return s;
}

std::string_view trim(std::string_view s, int& offset) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  offset += static_cast<int>(b);
  return s.substr(b, e - b);
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::map<std::string, Section> tokenize(std::string_view text) {
  std::map<std::string, Section> sections;
  sections[""];
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    bool quoted = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') quoted = !quoted;
      if (!quoted && (raw[i] == '#' || raw[i] == ';')) {
        raw = raw.substr(0, i);
        break;
      }
    }
    int col = 1;
    std::string_view line = trim(raw, col);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigParseError(line_no, col + static_cast<int>(line.size()),
                               "expected ']' to close section header");
      int name_col = col + 1;
      std::string_view name = trim(line.substr(1, line.size() - 2), name_col);
      if (!valid_identifier(name))
        throw ConfigParseError(line_no, name_col, "invalid section name");
      current = std::string(name);
      if (!schema().contains(current) || current.empty())
        throw ConfigParseError(line_no, name_col, "unknown section [" + current + "]");
      if (sections.contains(current))
        throw ConfigParseError(line_no, name_col, "duplicate section [" + current + "]");
      sections[current];
    } else {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ConfigParseError(line_no, col + static_cast<int>(line.size()),
                               "expected '=' after key");
      int key_col = col;
      std::string_view key = trim(line.substr(0, eq), key_col);
      int value_col = col + static_cast<int>(eq) + 1;
      std::string_view value = trim(line.substr(eq + 1), value_col);
      if (!valid_identifier(key)) throw ConfigParseError(line_no, key_col, "invalid key name");
      const std::string k(key);
      const auto& allowed = schema().at(current);
      if (!allowed.contains(k))
        throw ConfigParseError(line_no, key_col,
                               "unknown key '" + k + "'" +
                                   (current.empty() ? std::string(" at top level")
                                                    : " in [" + current + "]"));
      if (value.empty()) throw ConfigParseError(line_no, value_col, "missing value for '" + k + "'");
      auto& sec = sections[current];
      if (sec.contains(k)) throw ConfigParseError(line_no, key_col, "duplicate key '" + k + "'");
      sec[k] = Entry{std::string(value), line_no, key_col, value_col};
    }
    if (eol == text.size()) break;
  }
  return sections;
}

class Reader {
 public:
  explicit Reader(std::map<std::string, Section> sections) : sections_(std::move(sections)) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto e = s->second.find(key);
    return e == s->second.end() ? nullptr : &e->second;
  }

  const Entry& require(const std::string& section, const std::string& key) const {
    if (const Entry* e = find(section, key)) return *e;
    throw ConfigParseError(last_line(), 1,
                           "missing mandatory key '" + key + "'" +
                               (section.empty() ? std::string(" at top level")
                                                : " in [" + section + "]"));
  }

  static double number(const Entry& e, std::string_view text, int col) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
      throw ConfigParseError(e.line, col, "expected a number, found '" + std::string(text) + "'");
    return v;
  }

  static double number(const Entry& e) { return number(e, e.value, e.value_col); }

  static Quad quad(const Entry& e) {
    Quad out{};
    std::string_view rest = e.value;
    int col = e.value_col;
    for (int i = 0; i < 4; ++i) {
      const std::size_t comma = rest.find(',');
      if ((i < 3) != (comma != std::string_view::npos))
        throw ConfigParseError(e.line, col, "expected exactly four comma-separated numbers");
      int item_col = col;
      const std::string_view item = trim(rest.substr(0, comma), item_col);
      out[i] = number(e, item, item_col);
      if (comma != std::string_view::npos) {
        rest = rest.substr(comma + 1);
        col += static_cast<int>(comma) + 1;
      }
    }
    return out;
  }

  static long integer(const Entry& e) {
    long v = 0;
    const auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size())
      throw ConfigParseError(e.line, e.value_col, "expected an integer, found '" + e.value + "'");
    return v;
  }

  static bool boolean(const Entry& e) {
    if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
    if (e.value == "false" || e.value == "no" || e.value == "0") return false;
    throw ConfigParseError(e.line, e.value_col, "expected true or false, found '" + e.value + "'");
  }

  static std::string string(const Entry& e) {
    if (e.value.size() >= 2 && e.value.front() == '"' && e.value.back() == '"')
      return e.value.substr(1, e.value.size() - 2);
    if (e.value.find('"') != std::string::npos)
      throw ConfigParseError(e.line, e.value_col, "unbalanced quote");
    return e.value;
  }

 private:
  int last_line() const {
    int l = 1;
    for (const auto& [_, sec] : sections_)
      for (const auto& [__, e] : sec) l = std::max(l, e.line);
    return l;
  }

  std::map<std::string, Section> sections_;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quad_text(const Quad& q) {
  return num(q[0]) + ", " + num(q[1]) + ", " + num(q[2]) + ", " + num(q[3]);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  const Reader r(tokenize(text));
  const Entry& units = r.require("", "units");
  const std::string unit = Reader::string(units);
  double scale = 0.0;
  if (unit == "MHz")
    scale = kTwoPi;
  else if (unit == "rad_per_us")
    scale = 1.0;
  else
    throw ConfigParseError(units.line, units.value_col,
                           "units must be 'MHz' or 'rad_per_us', found '" + unit + "'");
  auto freq = [&](const Entry& e) { return scale * Reader::number(e); };
  auto freq_quad = [&](const Entry& e) {
    Quad q = Reader::quad(e);
    for (double& v : q) v *= scale;
    return q;
  };

  RunConfig cfg;
  SystemParams& p = cfg.params;

  static const std::array<std::pair<int, int>, 6> pairs = {
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
  for (const auto& [i, j] : pairs) {
    const std::string key = "J" + std::to_string(i + 1) + std::to_string(j + 1);
    if (const Entry* e = r.find("couplings", key)) p.J(i, j) = p.J(j, i) = freq(*e);
  }
  p.g = freq(r.require("couplings", "g"));

  const Entry* omega = r.find("frequencies", "omega");
  const Entry* omega_tilde = r.find("frequencies", "omega_tilde");
  if (omega && omega_tilde)
    throw ConfigParseError(omega_tilde->line, omega_tilde->key_col,
                           "give either 'omega' or 'omega_tilde', not both");
  if (!omega && !omega_tilde) r.require("frequencies", "omega");
  if (omega_tilde) {
    p.omega_tilde = freq_quad(*omega_tilde);
  } else {
    const Quad w = freq_quad(*omega);
    for (int j = 0; j < 4; ++j) {
      double half_row = 0.0;
      for (int i = 0; i < 4; ++i)
        if (i != j) half_row += p.J(i, j);
      p.omega_tilde[j] = w[j] - 0.5 * half_row;
    }
  }
  const Quad shifted = p.omega();
  p.omega_rot = shifted;
  if (const Entry* e = r.find("frequencies", "omega_rot")) p.omega_rot = freq_quad(*e);
  p.omega_drive = p.omega_rot;
  if (const Entry* e = r.find("frequencies", "omega_drive")) p.omega_drive = freq_quad(*e);
  if (const Entry* e = r.find("frequencies", "kerr")) p.kerr = freq_quad(*e);

  p.lambda_rabi = freq(r.require("drive", "lambda"));
  p.lambda_probe = freq(r.require("drive", "lambda_probe"));
  p.lambda_drive = {p.lambda_rabi / 2.0, p.lambda_probe, 0.0, 0.0};
  if (const Entry* e = r.find("drive", "lambda_drive")) p.lambda_drive = freq_quad(*e);

  p.gamma = freq(r.require("dissipation", "gamma"));

  SweepPlan& plan = cfg.plan;
  plan.delta_min = freq(r.require("sweep", "delta_min"));
  plan.delta_max = freq(r.require("sweep", "delta_max"));
  plan.n_points = static_cast<int>(Reader::integer(r.require("sweep", "n_points")));
  plan.duration = Reader::number(r.require("sweep", "duration"));
  if (const Entry* e = r.find("sweep", "observable_mode"))
    plan.observable_mode = static_cast<int>(Reader::integer(*e));
  if (const Entry* e = r.find("sweep", "initial_state")) plan.initial_state = Reader::string(*e);
  if (const Entry* e = r.find("sweep", "peak_prominence"))
    cfg.peak_options.prominence = Reader::number(*e);
  cfg.peak_options.merge_radius = p.gamma;
  if (const Entry* e = r.find("sweep", "merge_radius")) cfg.peak_options.merge_radius = freq(*e);
  cfg.assign_tolerance = p.gamma;
  if (const Entry* e = r.find("sweep", "assign_tolerance")) cfg.assign_tolerance = freq(*e);

  SolverConfig& s = cfg.solver;
  if (const Entry* e = r.find("solver", "method")) {
    const std::string m = Reader::string(*e);
    if (m == "rk4")
      s.method = IntegrationMethod::Rk4;
    else if (m == "dp45")
      s.method = IntegrationMethod::Dp45;
    else
      throw ConfigParseError(e->line, e->value_col, "method must be 'rk4' or 'dp45'");
  }
  if (const Entry* e = r.find("solver", "dt_max")) s.dt_max = Reader::number(*e);
  if (const Entry* e = r.find("solver", "rel_tol")) s.rel_tol = Reader::number(*e);
  if (const Entry* e = r.find("solver", "abs_tol")) s.abs_tol = Reader::number(*e);
  if (const Entry* e = r.find("solver", "record_stride"))
    s.record_stride = static_cast<int>(Reader::integer(*e));
  if (const Entry* e = r.find("solver", "threads")) {
    const long t = Reader::integer(*e);
    if (t < 0) throw ConfigParseError(e->line, e->value_col, "threads must be >= 0");
    cfg.threads = static_cast<unsigned>(t);
  }

  OutputOptions& o = cfg.outputs;
  if (const Entry* e = r.find("output", "directory")) o.directory = Reader::string(*e);
  if (const Entry* e = r.find("output", "csv")) o.csv = Reader::boolean(*e);
  if (const Entry* e = r.find("output", "svg")) o.svg = Reader::boolean(*e);
  if (const Entry* e = r.find("output", "transitions")) o.transitions = Reader::boolean(*e);
  if (const Entry* e = r.find("output", "peaks")) o.peaks = Reader::boolean(*e);

  p.validate();
  plan.validate(p.gamma);
  if (!(s.dt_max > 0.0)) throw ValidationError("solver_dt_max", "dt_max must be positive");
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0))
    throw ValidationError("solver_tolerances", "rel_tol and abs_tol must be positive");
  if (s.record_stride < 0) throw ValidationError("solver_record_stride", "record_stride must be >= 0");
  if (!(cfg.peak_options.prominence >= 0.0 && cfg.peak_options.prominence < 1.0))
    throw ValidationError("peak_prominence", "peak_prominence must be in [0, 1)");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  const SystemParams& p = c.params;
  std::ostringstream os;
  os << "units = rad_per_us\n\n[frequencies]\n"
     << "omega_tilde = " << quad_text(p.omega_tilde) << "\n"
     << "omega_rot = " << quad_text(p.omega_rot) << "\n"
     << "omega_drive = " << quad_text(p.omega_drive) << "\n"
     << "kerr = " << quad_text(p.kerr) << "\n\n[couplings]\n"
     << "g = " << num(p.g) << "\n";
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      os << "J" << i + 1 << j + 1 << " = " << num(p.J(i, j)) << "\n";
  os << "\n[drive]\n"
     << "lambda = " << num(p.lambda_rabi) << "\n"
     << "lambda_probe = " << num(p.lambda_probe) << "\n"
     << "lambda_drive = " << quad_text(p.lambda_drive) << "\n\n[dissipation]\n"
     << "gamma = " << num(p.gamma) << "\n\n[sweep]\n"
     << "delta_min = " << num(c.plan.delta_min) << "\n"
     << "delta_max = " << num(c.plan.delta_max) << "\n"
     << "n_points = " << c.plan.n_points << "\n"
     << "duration = " << num(c.plan.duration) << "\n"
     << "observable_mode = " << c.plan.observable_mode << "\n"
     << "initial_state = " << c.plan.initial_state << "\n"
     << "peak_prominence = " << num(c.peak_options.prominence) << "\n"
     << "merge_radius = " << num(c.peak_options.merge_radius) << "\n"
     << "assign_tolerance = " << num(c.assign_tolerance) << "\n\n[solver]\n"
     << "method = " << (c.solver.method == IntegrationMethod::Rk4 ? "rk4" : "dp45") << "\n"
     << "dt_max = " << num(c.solver.dt_max) << "\n"
     << "rel_tol = " << num(c.solver.rel_tol) << "\n"
     << "abs_tol = " << num(c.solver.abs_tol) << "\n"
     << "record_stride = " << c.solver.record_stride << "\n"
     << "threads = " << c.threads << "\n\n[output]\n"
     << "directory = \"" << c.outputs.directory << "\"\n"
     << "csv = " << (c.outputs.csv ? "true" : "false") << "\n"
     << "svg = " << (c.outputs.svg ? "true" : "false") << "\n"
     << "transitions = " << (c.outputs.transitions ? "true" : "false") << "\n"
     << "peaks = " << (c.outputs.peaks ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace knrspec
