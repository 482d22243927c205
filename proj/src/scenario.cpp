#include "ramsim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ramsim/bessel.hpp"
#include "ramsim/errors.hpp"

namespace ramsim {

namespace {

struct Value {
  std::string text;
  std::size_t line;
};

struct Section {
  std::size_t line = 0;
  std::map<std::string, Value> values;
};

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"scenario", {"name", "topology"}},
      {"modulation", {"f_carrier", "f_m", "beta", "n_max"}},
      {"aom", {"v_ac", "wavelength", "f_lens", "lateral_shift", "output_plane"}},
      {"laser", {"power", "w0", "pol_angle"}},
      {"rf_response", {"kind", "coefficients_re", "coefficients_im", "freqs", "gains_re", "gains_im"}},
      {"telescope", {"w0", "shift_scale"}},
      {"splitter", {"r_p", "r_s"}},
      {"waveplate", {"angle"}},
      {"fiber", {"w_fiber", "offset_x", "tilt"}},
      {"pd1", {"aperture", "edge_x", "center_x", "center_y", "half_width", "half_height", "rho"}},
      {"pd2", {"aperture", "edge_x", "center_x", "center_y", "half_width", "half_height", "rho"}},
      {"controller", {"gain", "dt", "steps", "probe", "reference_phase", "error_noise"}},
      {"noise", {"seed", "rin_level", "corner_hz"}},
      {"spectrum", {"f_s", "rbw", "span_width", "window", "duration"}},
      {"fig2", {"x_min", "x_max", "points"}},
  };
  return s;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const Value& v, const std::string& key) {
  double out = 0.0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out))
    throw ConfigError(v.line, fmt::format("'{}' expects a finite number, got '{}'", key, v.text));
  return out;
}

long long parse_integer(const Value& v, const std::string& key) {
  long long out = 0;
  const char* first = v.text.data();
  const char* last = first + v.text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw ConfigError(v.line, fmt::format("'{}' expects an integer, got '{}'", key, v.text));
  return out;
}

std::vector<double> parse_list(const Value& v, const std::string& key) {
  std::vector<double> out;
  std::string_view rest = v.text;
  while (true) {
    const auto comma = rest.find(',');
    const std::string item{trim(rest.substr(0, comma))};
    out.push_back(parse_double({item, v.line}, key));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

// Reads one section, remembering its line for validation errors.
class Reader {
 public:
  Reader(const std::string& name, const Section* section) : name_(name), section_(section) {}

  bool present() const { return section_ != nullptr; }
  std::size_t line() const { return section_ ? section_->line : 0; }
  bool has(const std::string& key) const { return section_ && section_->values.count(key) > 0; }

  const Value& raw(const std::string& key) const {
    if (!has(key)) throw ConfigError(line(), fmt::format("missing key: {}.{}", name_, key));
    return section_->values.at(key);
  }
  double number(const std::string& key) const { return parse_double(raw(key), key); }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }
  long long integer(const std::string& key, long long fallback) const {
    return has(key) ? parse_integer(raw(key), key) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw(key).text : fallback;
  }
  std::vector<double> list(const std::string& key) const { return parse_list(raw(key), key); }
  std::optional<double> number_or_auto(const std::string& key) const {
    if (!has(key) || raw(key).text == "auto") return std::nullopt;
    return number(key);
  }
  void forbid(const std::string& key, const std::string& why) const {
    if (has(key)) throw ConfigError(raw(key).line, fmt::format("key {}.{} is not used {}", name_, key, why));
  }

  template <class F>
  void check(F&& f) const {
    try {
      f();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(line(), e.what());
    }
  }

 private:
  std::string name_;
  const Section* section_;
};

std::vector<cplx> combine(const std::vector<double>& re, const std::vector<double>& im, std::size_t line,
                          const std::string& what) {
  if (!im.empty() && im.size() != re.size())
    throw ConfigError(line, fmt::format("{}: real and imaginary lists differ in length", what));
  std::vector<cplx> out;
  for (std::size_t i = 0; i < re.size(); ++i) out.emplace_back(re[i], im.empty() ? 0.0 : im[i]);
  return out;
}

DetectorSpec read_detector(const Reader& r) {
  DetectorSpec det;
  const std::string kind = r.text("aperture", "full");
  if (kind == "full") {
    det.aperture = FullPlane{};
    for (const char* k : {"edge_x", "center_x", "center_y", "half_width", "half_height"})
      r.forbid(k, "by a full-plane aperture");
  } else if (kind == "screen") {
    det.aperture = HalfPlaneScreen{r.number("edge_x")};
    for (const char* k : {"center_x", "center_y", "half_width", "half_height"}) r.forbid(k, "by a screen aperture");
  } else if (kind == "rect") {
    det.aperture = OffsetRect{r.number("center_x", 0.0), r.number("center_y", 0.0), r.number("half_width"),
                              r.number("half_height")};
    r.forbid("edge_x", "by a rect aperture");
  } else {
    throw ConfigError(r.raw("aperture").line, fmt::format("unknown aperture '{}' (full, screen, rect)", kind));
  }
  det.rho = r.number("rho", 1.0);
  r.check([&] { det.validate(); });
  return det;
}

std::string num(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s;
}

void write_detector(std::ostringstream& os, const char* name, const DetectorSpec& d) {
  os << "\n[" << name << "]\n";
  if (std::holds_alternative<FullPlane>(d.aperture)) {
    os << "aperture = full\n";
  } else if (const auto* s = std::get_if<HalfPlaneScreen>(&d.aperture)) {
    os << "aperture = screen\nedge_x = " << num(s->edge_x) << "\n";
  } else if (const auto* r = std::get_if<OffsetRect>(&d.aperture)) {
    os << "aperture = rect\ncenter_x = " << num(r->center_x) << "\ncenter_y = " << num(r->center_y)
       << "\nhalf_width = " << num(r->half_width) << "\nhalf_height = " << num(r->half_height) << "\n";
  }
  os << "rho = " << num(d.rho) << "\n";
}

}  // namespace

std::string to_string(Topology t) { return t == Topology::Fig1 ? "fig1" : "fig3"; }

RfChainResponse RfSource::build(const ModulationSpec& mod) const {
  RfChainResponse rf = kind == Kind::Polynomial ? RfChainResponse::from_polynomial(coefficients, mod)
                                                : RfChainResponse(table_freqs, table_gains);
  rf.validate_covers(mod);
  return rf;
}

void Scenario::validate() const {
  if (format_version != kFormatVersion) throw InvalidArgument(fmt::format("unsupported format_version {}", format_version));
  modulation.validate();
  aom.validate();
  if (!(laser.power > 0.0) || !(laser.w0 > 0.0)) throw InvalidArgument("laser: power and w0 must be > 0");
  rf.build(modulation);
  if (!(telescope.w0 > 0.0) || !std::isfinite(telescope.shift_scale))
    throw InvalidArgument("telescope: w0 must be > 0 and shift_scale finite");
  splitter.validate();
  if (fiber) fiber->validate();
  if (topology == Topology::Fig3 && !fiber) throw InvalidArgument("topology fig3 requires a [fiber] section");
  pd1.validate();
  pd2.validate();
  if (!(controller.gain > 0.0) || !(controller.dt > 0.0)) throw InvalidArgument("controller: gain and dt must be > 0");
  if (!(controller.gain * controller.dt < 2.0)) throw InvalidArgument("controller: gain * dt must be < 2");
  if (controller.steps < 1) throw InvalidArgument("controller: steps must be >= 1");
  if (!(controller.probe > 0.0 && controller.probe < 0.5)) throw InvalidArgument("controller: probe must lie in (0, 0.5)");
  if (!(controller.error_noise >= 0.0)) throw InvalidArgument("controller: error_noise must be >= 0");
  if (noise) noise->validate();
  if (!(spectrum.f_s >= 8.0 * modulation.f_m)) throw InvalidArgument("spectrum: f_s must be at least 8 f_m");
  if (!(spectrum.rbw_hz > 0.0) || !(spectrum.span_width > 0.0)) throw InvalidArgument("spectrum: rbw and span_width must be > 0");
  if (spectrum.duration && !(*spectrum.duration > 0.0)) throw InvalidArgument("spectrum: duration must be > 0");
  if (fig2.points < 2 || !(fig2.x_max > fig2.x_min)) throw InvalidArgument("fig2: need points >= 2 and x_max > x_min");
}

Scenario parse_scenario(std::string_view text) {
  std::map<std::string, Section> sections;
  Section top;
  Section* current = &top;
  std::string current_name;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "malformed section header");
      current_name = std::string(trim(line.substr(1, line.size() - 2)));
      if (!schema().count(current_name)) throw ConfigError(line_no, fmt::format("unknown section: {}", current_name));
      if (sections.count(current_name)) throw ConfigError(line_no, fmt::format("duplicate section: {}", current_name));
      current = &sections[current_name];
      current->line = line_no;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty() || value.empty()) throw ConfigError(line_no, "expected 'key = value'");
    if (current == &top) {
      if (key != "format_version") throw ConfigError(line_no, fmt::format("unknown top-level key: {}", key));
    } else if (!schema().at(current_name).count(key)) {
      throw ConfigError(line_no, fmt::format("unknown key '{}' in section [{}]", key, current_name));
    }
    if (current->values.count(key)) throw ConfigError(line_no, fmt::format("duplicate key: {}", key));
    current->values[key] = {value, line_no};
  }

  for (const char* required : {"modulation", "aom", "laser"})
    if (!sections.count(required)) throw ConfigError(0, fmt::format("missing section: {}", required));
  auto section = [&](const std::string& name) {
    auto it = sections.find(name);
    return Reader(name, it == sections.end() ? nullptr : &it->second);
  };

  Scenario s;
  const Reader root("", &top);
  if (!root.has("format_version")) throw ConfigError(0, "missing key: format_version");
  s.format_version = static_cast<int>(parse_integer(root.raw("format_version"), "format_version"));
  if (s.format_version != kFormatVersion)
    throw ConfigError(root.raw("format_version").line, fmt::format("unsupported format_version {}", s.format_version));

  std::size_t topology_line = 0;
  if (const Reader r = section("scenario"); r.present()) {
    s.name = r.text("name", s.name);
    const std::string topo = r.text("topology", "fig1");
    if (topo == "fig1") s.topology = Topology::Fig1;
    else if (topo == "fig3") s.topology = Topology::Fig3;
    else throw ConfigError(r.raw("topology").line, fmt::format("unknown topology '{}' (fig1, fig3)", topo));
    topology_line = r.has("topology") ? r.raw("topology").line : r.line();
  }

  {
    const Reader r = section("modulation");
    s.modulation.f_carrier = r.number("f_carrier", 250e6);
    s.modulation.f_m = r.number("f_m");
    s.modulation.beta = r.number("beta");
    long long fallback = 8;
    if (!r.has("n_max")) r.check([&] { fallback = std::max(8, minimum_sideband_order(s.modulation.beta)); });
    const long long n_max = r.integer("n_max", fallback);
    if (n_max < 1 || n_max > 10000) throw ConfigError(r.line(), "modulation: n_max must lie in [1, 10000]");
    s.modulation.n_max = static_cast<int>(n_max);
    r.check([&] { s.modulation.validate(); });
  }
  {
    const Reader r = section("aom");
    s.aom.v_ac = r.number("v_ac");
    s.aom.wavelength = r.number("wavelength");
    s.aom.f_lens = r.number("f_lens");
    if (r.has("lateral_shift")) s.aom.lateral_shift_override = r.number("lateral_shift");
    const std::string plane = r.text("output_plane", "lens_focal");
    if (plane == "lens_focal") s.aom_plane = AomOutputPlane::LensFocal;
    else if (plane == "aom_exit") s.aom_plane = AomOutputPlane::AomExit;
    else throw ConfigError(r.raw("output_plane").line, fmt::format("unknown output_plane '{}'", plane));
    r.check([&] { s.aom.validate(); });
  }
  {
    const Reader r = section("laser");
    s.laser.power = r.number("power", s.laser.power);
    s.laser.w0 = r.number("w0");
    s.laser.pol_angle = r.number("pol_angle", 0.0);
    if (!(s.laser.power > 0.0) || !(s.laser.w0 > 0.0)) throw ConfigError(r.line(), "laser: power and w0 must be > 0");
  }
  if (const Reader r = section("rf_response"); r.present()) {
    const std::string kind = r.text("kind", "polynomial");
    if (kind == "polynomial") {
      s.rf.kind = RfSource::Kind::Polynomial;
      for (const char* k : {"freqs", "gains_re", "gains_im"}) r.forbid(k, "by a polynomial response");
      s.rf.coefficients = combine(r.list("coefficients_re"),
                                  r.has("coefficients_im") ? r.list("coefficients_im") : std::vector<double>{},
                                  r.line(), "rf_response coefficients");
    } else if (kind == "table") {
      s.rf.kind = RfSource::Kind::Table;
      for (const char* k : {"coefficients_re", "coefficients_im"}) r.forbid(k, "by a table response");
      s.rf.coefficients.clear();
      s.rf.table_freqs = r.list("freqs");
      s.rf.table_gains = combine(r.list("gains_re"), r.has("gains_im") ? r.list("gains_im") : std::vector<double>{},
                                 r.line(), "rf_response gains");
      if (s.rf.table_gains.size() != s.rf.table_freqs.size())
        throw ConfigError(r.line(), "rf_response: freqs and gains differ in length");
    } else {
      throw ConfigError(r.raw("kind").line, fmt::format("unknown rf_response kind '{}'", kind));
    }
    r.check([&] { s.rf.build(s.modulation); });
  }
  if (const Reader r = section("telescope"); r.present()) {
    s.telescope.w0 = r.number("w0", s.telescope.w0);
    s.telescope.shift_scale = r.number("shift_scale", s.telescope.shift_scale);
    if (!(s.telescope.w0 > 0.0)) throw ConfigError(r.line(), "telescope: w0 must be > 0");
  }
  if (const Reader r = section("splitter"); r.present()) {
    s.splitter.r_p = r.number("r_p", s.splitter.r_p);
    s.splitter.r_s = r.number("r_s", s.splitter.r_s);
    r.check([&] { s.splitter.validate(); });
  }
  if (const Reader r = section("waveplate"); r.present()) s.plate_angle = r.number("angle", 0.0);
  if (const Reader r = section("fiber"); r.present()) {
    FiberSpec f;
    f.w_fiber = r.number("w_fiber");
    f.offset_x = r.number("offset_x", 0.0);
    f.tilt = r.number("tilt", 0.0);
    r.check([&] { f.validate(); });
    s.fiber = f;
  }
  if (const Reader r = section("pd1"); r.present()) s.pd1 = read_detector(r);
  if (const Reader r = section("pd2"); r.present()) s.pd2 = read_detector(r);
  if (const Reader r = section("controller"); r.present()) {
    auto& c = s.controller;
    c.gain = r.number("gain", c.gain);
    c.dt = r.number("dt", c.dt);
    const long long steps = r.integer("steps", c.steps);
    if (steps < 1 || steps > 100000000) throw ConfigError(r.line(), "controller: steps must lie in [1, 1e8]");
    c.steps = static_cast<int>(steps);
    c.probe = r.number("probe", c.probe);
    c.reference_phase = r.number_or_auto("reference_phase");
    c.error_noise = r.number("error_noise", 0.0);
  }
  if (const Reader r = section("noise"); r.present()) {
    NoiseSpec n;
    const long long seed = r.integer("seed", 1);
    if (seed < 0) throw ConfigError(r.raw("seed").line, "noise: seed must be >= 0");
    n.seed = static_cast<std::uint64_t>(seed);
    n.rin_level = r.number("rin_level", 0.0);
    n.corner_hz = r.number("corner_hz", n.corner_hz);
    r.check([&] { n.validate(); });
    s.noise = n;
  }
  if (const Reader r = section("spectrum"); r.present()) {
    auto& sp = s.spectrum;
    sp.f_s = r.number("f_s", sp.f_s);
    sp.rbw_hz = r.number("rbw", sp.rbw_hz);
    sp.span_width = r.number("span_width", sp.span_width);
    r.check([&] { sp.window = window_from_string(r.text("window", to_string(sp.window))); });
    sp.duration = r.number_or_auto("duration");
  }
  if (const Reader r = section("fig2"); r.present()) {
    s.fig2.x_min = r.number("x_min", s.fig2.x_min);
    s.fig2.x_max = r.number("x_max", s.fig2.x_max);
    const long long points = r.integer("points", s.fig2.points);
    if (points < 2 || points > 1000000) throw ConfigError(r.line(), "fig2: points must lie in [2, 1e6]");
    s.fig2.points = static_cast<int>(points);
  }

  if (s.topology == Topology::Fig3 && !s.fiber)
    throw ConfigError(topology_line, "topology fig3 requires a [fiber] section");
  try {
    s.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(0, e.what());
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, fmt::format("cannot open scenario file '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_text(const Scenario& s) {
  std::ostringstream os;
  os << "format_version = " << s.format_version << "\n";
  os << "\n[scenario]\nname = " << s.name << "\ntopology = " << to_string(s.topology) << "\n";
  os << "\n[modulation]\nf_carrier = " << num(s.modulation.f_carrier) << "\nf_m = " << num(s.modulation.f_m)
     << "\nbeta = " << num(s.modulation.beta) << "\nn_max = " << s.modulation.n_max << "\n";
  os << "\n[aom]\nv_ac = " << num(s.aom.v_ac) << "\nwavelength = " << num(s.aom.wavelength)
     << "\nf_lens = " << num(s.aom.f_lens) << "\n";
  if (s.aom.lateral_shift_override) os << "lateral_shift = " << num(*s.aom.lateral_shift_override) << "\n";
  os << "output_plane = " << (s.aom_plane == AomOutputPlane::LensFocal ? "lens_focal" : "aom_exit") << "\n";
  os << "\n[laser]\npower = " << num(s.laser.power) << "\nw0 = " << num(s.laser.w0)
     << "\npol_angle = " << num(s.laser.pol_angle) << "\n";

  os << "\n[rf_response]\n";
  auto parts = [](const std::vector<cplx>& v, bool imag) {
    std::vector<double> out;
    for (const auto& c : v) out.push_back(imag ? c.imag() : c.real());
    return out;
  };
  if (s.rf.kind == RfSource::Kind::Polynomial) {
    os << "kind = polynomial\ncoefficients_re = " << join(parts(s.rf.coefficients, false))
       << "\ncoefficients_im = " << join(parts(s.rf.coefficients, true)) << "\n";
  } else {
    os << "kind = table\nfreqs = " << join(s.rf.table_freqs) << "\ngains_re = " << join(parts(s.rf.table_gains, false))
       << "\ngains_im = " << join(parts(s.rf.table_gains, true)) << "\n";
  }

  os << "\n[telescope]\nw0 = " << num(s.telescope.w0) << "\nshift_scale = " << num(s.telescope.shift_scale) << "\n";
  os << "\n[splitter]\nr_p = " << num(s.splitter.r_p) << "\nr_s = " << num(s.splitter.r_s) << "\n";
  os << "\n[waveplate]\nangle = " << num(s.plate_angle) << "\n";
  if (s.fiber)
    os << "\n[fiber]\nw_fiber = " << num(s.fiber->w_fiber) << "\noffset_x = " << num(s.fiber->offset_x)
       << "\ntilt = " << num(s.fiber->tilt) << "\n";
  write_detector(os, "pd1", s.pd1);
  write_detector(os, "pd2", s.pd2);

  const auto& c = s.controller;
  os << "\n[controller]\ngain = " << num(c.gain) << "\ndt = " << num(c.dt) << "\nsteps = " << c.steps
     << "\nprobe = " << num(c.probe)
     << "\nreference_phase = " << (c.reference_phase ? num(*c.reference_phase) : std::string("auto"))
     << "\nerror_noise = " << num(c.error_noise) << "\n";
  if (s.noise)
    os << "\n[noise]\nseed = " << s.noise->seed << "\nrin_level = " << num(s.noise->rin_level)
       << "\ncorner_hz = " << num(s.noise->corner_hz) << "\n";
  const auto& sp = s.spectrum;
  os << "\n[spectrum]\nf_s = " << num(sp.f_s) << "\nrbw = " << num(sp.rbw_hz) << "\nspan_width = " << num(sp.span_width)
     << "\nwindow = " << to_string(sp.window)
     << "\nduration = " << (sp.duration ? num(*sp.duration) : std::string("auto")) << "\n";
  os << "\n[fig2]\nx_min = " << num(s.fig2.x_min) << "\nx_max = " << num(s.fig2.x_max) << "\npoints = " << s.fig2.points
     << "\n";
  return os.str();
}

std::string scenario_hash(const Scenario& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_text(s)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace ramsim
