#include "wmr/io.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "wmr/errors.hpp"
#include "wmr/metrics.hpp"

namespace wmr::io {

using nlohmann::json;

namespace {

// Strict view over one JSON object: every key must be consumed.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path))
  {
    if (!j_.is_object()) {
      throw ScenarioInvalid(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key)
  {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::optional<double> opt_number(const std::string& key)
  {
    const json* v = find(key);
    if (v == nullptr) {
      return std::nullopt;
    }
    if (!v->is_number()) {
      throw ScenarioInvalid(field(key), "expected a number");
    }
    return v->get<double>();
  }

  double number(const std::string& key, double fallback) { return opt_number(key).value_or(fallback); }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback)
  {
    const json* v = find(key);
    if (v == nullptr) {
      return fallback;
    }
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
      throw ScenarioInvalid(field(key), "expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
  }

  int integer(const std::string& key, int fallback)
  {
    const json* v = find(key);
    if (v == nullptr) {
      return fallback;
    }
    if (!v->is_number_integer()) {
      throw ScenarioInvalid(field(key), "expected an integer");
    }
    return v->get<int>();
  }

  std::string string(const std::string& key, const std::string& fallback)
  {
    const json* v = find(key);
    if (v == nullptr) {
      return fallback;
    }
    if (!v->is_string()) {
      throw ScenarioInvalid(field(key), "expected a string");
    }
    return v->get<std::string>();
  }

  template <int N>
  std::optional<Eigen::Matrix<double, N, 1>> opt_vector(const std::string& key)
  {
    const json* v = find(key);
    if (v == nullptr) {
      return std::nullopt;
    }
    if (!v->is_array() || v->size() != N) {
      throw ScenarioInvalid(field(key), fmt::format("expected an array of {} numbers", N));
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
      const auto& e = (*v)[static_cast<std::size_t>(i)];
      if (!e.is_number()) {
        throw ScenarioInvalid(field(key), "expected numbers");
      }
      out[i] = e.get<double>();
    }
    return out;
  }

  void finish() const
  {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) {
        throw ScenarioInvalid(field(key), "unknown key");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

control::AxisGains read_axis_gains(ObjectReader& r, control::AxisGains g)
{
  g.kappa1 = r.number("kappa1", g.kappa1);
  g.kappa2 = r.number("kappa2", g.kappa2);
  g.phi = r.number("phi", g.phi);
  g.mu = r.number("mu", g.mu);
  g.beta = r.number("beta", g.beta);
  g.upsilon1 = r.number("upsilon1", g.upsilon1);
  g.upsilon2 = r.number("upsilon2", g.upsilon2);
  return g;
}

control::GainSet read_gains(const json& j, const std::string& path)
{
  ObjectReader r(j, path);
  control::GainSet gains;
  // Shared values apply to both axes; "x"/"y" blocks override per axis.
  const control::AxisGains shared = read_axis_gains(r, control::AxisGains{});
  gains.x = shared;
  gains.y = shared;
  if (const json* x = r.find("x")) {
    ObjectReader rx(*x, r.field("x"));
    gains.x = read_axis_gains(rx, shared);
    rx.finish();
  }
  if (const json* y = r.find("y")) {
    ObjectReader ry(*y, r.field("y"));
    gains.y = read_axis_gains(ry, shared);
    ry.finish();
  }
  r.finish();
  return gains;
}

control::Chattering read_chattering(const json& j, const std::string& path)
{
  if (j.is_string()) {
    try {
      return parse_chattering(j.get<std::string>());
    } catch (const ScenarioInvalid& e) {
      throw ScenarioInvalid(path, e.what());
    }
  }
  ObjectReader r(j, path);
  control::Chattering c;
  const std::string kind = r.string("kind", "sign");
  if (kind == "sign") {
    c.kind = control::Chattering::Kind::sign;
  } else if (kind == "boundary_layer" || kind == "boundary") {
    c.kind = control::Chattering::Kind::boundary_layer;
  } else {
    throw ScenarioInvalid(r.field("kind"), "expected sign or boundary_layer");
  }
  c.width = r.number("width", c.width);
  r.finish();
  return c;
}

NamedController read_controller(const json& j, const std::string& path, const std::string& default_label)
{
  ObjectReader r(j, path);
  const std::string type = r.string("type", "inhsmc");
  NamedController out;
  control::Chattering chattering;
  if (const json* c = r.find("chattering")) {
    chattering = read_chattering(*c, r.field("chattering"));
  }
  if (type == "inhsmc") {
    out.label = r.string("label", default_label.empty() ? "INH-SMC" : default_label);
    control::InhsmcConfig cfg;
    cfg.chattering = chattering;
    const std::string mode = r.string("mode", "derived");
    try {
      cfg.mode = parse_mode(mode);
    } catch (const ScenarioInvalid&) {
      throw ScenarioInvalid(r.field("mode"), "expected paper or derived");
    }
    if (const json* g = r.find("gains")) {
      cfg.gains = read_gains(*g, r.field("gains"));
    }
    out.config = cfg;
  } else if (type == "fbsmc") {
    out.label = r.string("label", default_label.empty() ? "FBSMC" : default_label);
    control::FbsmcConfig cfg;
    cfg.chattering = chattering;
    cfg.params.lambda = r.number("lambda", cfg.params.lambda);
    cfg.params.eta = r.number("eta", cfg.params.eta);
    cfg.params.k = r.number("k", cfg.params.k);
    out.config = cfg;
  } else {
    throw ScenarioInvalid(r.field("type"), "expected inhsmc or fbsmc");
  }
  r.finish();
  return out;
}

TrajectorySpec read_trajectory(const json& j)
{
  ObjectReader r(j, "trajectory");
  TrajectorySpec t;
  const std::string kind = r.string("kind", "circle");
  if (kind == "circle") {
    t.kind = TrajectorySpec::Kind::circle;
  } else if (kind == "lemniscate") {
    t.kind = TrajectorySpec::Kind::lemniscate;
  } else if (kind == "line_segment_smoothed" || kind == "line") {
    t.kind = TrajectorySpec::Kind::line_segment_smoothed;
  } else {
    throw ScenarioInvalid("trajectory.kind", "expected circle, lemniscate or line_segment_smoothed");
  }
  t.start_time = r.number("start_time", t.start_time);
  if (t.kind == TrajectorySpec::Kind::line_segment_smoothed) {
    if (auto start = r.opt_vector<2>("start")) {
      t.center = *start;
    }
    t.phase = r.number("heading", t.phase);
    t.speed = r.number("speed", t.speed);
    t.initial_speed = r.number("initial_speed", t.initial_speed);
    t.ramp_time = r.number("ramp_time", t.ramp_time);
  } else {
    if (auto center = r.opt_vector<2>("center")) {
      t.center = *center;
    }
    t.scale = r.number(t.kind == TrajectorySpec::Kind::circle ? "radius" : "scale", t.scale);
    t.angular_rate = r.number("angular_rate", t.angular_rate);
    t.phase = r.number("phase", t.phase);
  }
  r.finish();
  return t;
}

DisturbanceSegment read_segment(const json& j, const std::string& path)
{
  ObjectReader r(j, path);
  DisturbanceSegment s;
  const std::string profile = r.string("profile", "");
  if (profile == "constant") {
    s.profile = DisturbanceSegment::Profile::constant;
  } else if (profile == "smooth_step") {
    s.profile = DisturbanceSegment::Profile::smooth_step;
    s.rise_time = r.number("rise_time", s.rise_time);
  } else if (profile == "sinusoid") {
    s.profile = DisturbanceSegment::Profile::sinusoid;
    s.frequency = r.number("frequency", s.frequency);
    s.phase = r.number("phase", s.phase);
  } else if (profile == "band_noise") {
    s.profile = DisturbanceSegment::Profile::band_noise;
    s.seed = r.unsigned_integer("seed", s.seed);
    s.cutoff = r.number("cutoff", s.cutoff);
    s.components = r.integer("components", s.components);
  } else {
    throw ScenarioInvalid(r.field("profile"), "expected constant, smooth_step, sinusoid or band_noise");
  }
  s.t_start = r.number("t_start", s.t_start);
  s.t_end = r.number("t_end", s.t_end);
  if (auto a = r.opt_vector<3>("amplitude")) {
    s.amplitude = *a;
  } else {
    throw ScenarioInvalid(r.field("amplitude"), "required");
  }
  r.finish();
  return s;
}

DisturbanceSpec read_disturbance(const json& j)
{
  ObjectReader r(j, "disturbance");
  DisturbanceSpec d;
  d.declared_bound = r.number("declared_bound", d.declared_bound);
  if (const json* segs = r.find("segments")) {
    if (!segs->is_array()) {
      throw ScenarioInvalid("disturbance.segments", "expected an array");
    }
    for (std::size_t i = 0; i < segs->size(); ++i) {
      d.segments.push_back(read_segment((*segs)[i], fmt::format("disturbance.segments[{}]", i)));
    }
  }
  r.finish();
  return d;
}

std::string fmt_num(double v) { return fmt::format("{}", v); }

}  // namespace

control::EquivalentMode parse_mode(const std::string& text)
{
  if (text == "paper") {
    return control::EquivalentMode::paper;
  }
  if (text == "derived") {
    return control::EquivalentMode::derived;
  }
  throw ScenarioInvalid("mode", "expected paper or derived, got '" + text + "'");
}

control::Chattering parse_chattering(const std::string& text)
{
  control::Chattering c;
  if (text == "sign") {
    c.kind = control::Chattering::Kind::sign;
  } else if (text == "boundary" || text == "boundary_layer") {
    c.kind = control::Chattering::Kind::boundary_layer;
  } else {
    throw ScenarioInvalid("chattering", "expected sign or boundary, got '" + text + "'");
  }
  return c;
}

Scenario scenario_from_json(const json& doc, const std::string& default_id)
{
  ObjectReader r(doc, "");
  Scenario s;
  s.id = r.string("id", default_id);
  s.dt = r.number("dt", s.dt);
  s.duration = r.number("duration", s.duration);
  s.seed = r.unsigned_integer("seed", s.seed);
  s.control_decimation = r.integer("control_decimation", s.control_decimation);

  if (const json* lim = r.find("limits")) {
    ObjectReader lr(*lim, "limits");
    s.limits.v_max = lr.number("v_max", s.limits.v_max);
    s.limits.w_max = lr.number("w_max", s.limits.w_max);
    lr.finish();
  }
  if (const json* geo = r.find("geometry")) {
    ObjectReader gr(*geo, "geometry");
    s.geometry.r = gr.number("r", s.geometry.r);
    s.geometry.D = gr.number("D", s.geometry.D);
    gr.finish();
  }
  if (const json* traj = r.find("trajectory")) {
    s.trajectory = read_trajectory(*traj);
  }
  if (const json* c = r.find("controller")) {
    s.controller = read_controller(*c, "controller", "");
  }
  if (const json* b = r.find("baseline")) {
    s.baseline = read_controller(*b, "baseline", "");
  }
  if (const json* d = r.find("disturbance")) {
    s.disturbance = read_disturbance(*d);
  }

  // Initial state defaults to the reference at t = 0.
  s.trajectory.validate();
  s.start_on_reference();
  if (const json* init = r.find("initial")) {
    ObjectReader ir(*init, "initial");
    s.initial_pose.x = ir.number("x", s.initial_pose.x);
    s.initial_pose.y = ir.number("y", s.initial_pose.y);
    s.initial_pose.theta = ir.number("theta", s.initial_pose.theta);
    s.initial_v = ir.number("v", s.initial_v);
    ir.finish();
  }
  r.finish();
  return s;
}

json read_json(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path)
{
  return scenario_from_json(read_json(path), path.stem().string());
}

json to_json(const control::GainSet& gains)
{
  auto axis = [](const control::AxisGains& g) {
    return json{{"kappa1", g.kappa1}, {"kappa2", g.kappa2},     {"phi", g.phi},          {"mu", g.mu},
                {"beta", g.beta},     {"upsilon1", g.upsilon1}, {"upsilon2", g.upsilon2}};
  };
  return {{"x", axis(gains.x)}, {"y", axis(gains.y)}};
}

json to_json(const NamedController& controller)
{
  auto chattering = [](const control::Chattering& c) {
    return c.kind == control::Chattering::Kind::sign ? json{{"kind", "sign"}}
                                                     : json{{"kind", "boundary_layer"}, {"width", c.width}};
  };
  if (const auto* inh = std::get_if<control::InhsmcConfig>(&controller.config)) {
    return {{"label", controller.label},
            {"type", "inhsmc"},
            {"mode", inh->mode == control::EquivalentMode::paper ? "paper" : "derived"},
            {"chattering", chattering(inh->chattering)},
            {"gains", to_json(inh->gains)}};
  }
  const auto& fb = std::get<control::FbsmcConfig>(controller.config);
  return {{"label", controller.label},    {"type", "fbsmc"},   {"lambda", fb.params.lambda},
          {"eta", fb.params.eta},         {"k", fb.params.k}, {"chattering", chattering(fb.chattering)}};
}

void write_trace_csv(const SimTrace& trace, std::ostream& out)
{
  out << kTraceHeader << '\n';
  std::string line;
  for (const auto& r : trace.rows) {
    const std::array<double, 27> values{r.t,
                                        r.pose.x,
                                        r.pose.y,
                                        r.pose.theta,
                                        r.commanded.v,
                                        r.commanded.w,
                                        r.saturated.v,
                                        r.saturated.w,
                                        r.actual.gamma.x(),
                                        r.actual.gamma.y(),
                                        r.desired.gamma.x(),
                                        r.desired.gamma.y(),
                                        r.e.x(),
                                        r.e.y(),
                                        r.s.x(),
                                        r.s.y(),
                                        r.sigma.x(),
                                        r.sigma.y(),
                                        r.control.v_x,
                                        r.control.v_y,
                                        r.inputs.u_n1,
                                        r.inputs.u_n2,
                                        r.disturbance.d_x,
                                        r.disturbance.d_y,
                                        r.disturbance.d_theta,
                                        r.varpi.varpi_x,
                                        r.varpi.varpi_y};
    line.clear();
    for (double v : values) {
      line += fmt_num(v);
      line += ',';
    }
    line += r.fault ? '1' : '0';
    out << line << '\n';
  }
}

void write_trace_csv(const SimTrace& trace, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_trace_csv(trace, out);
}

json summarize(const SimTrace& trace)
{
  const metrics::MetricsReport report = metrics::evaluate(trace);
  double max_ex = 0.0;
  double max_ey = 0.0;
  for (const auto& r : trace.rows) {
    max_ex = std::max(max_ex, std::abs(r.e.x()));
    max_ey = std::max(max_ey, std::abs(r.e.y()));
  }
  const auto& last = trace.rows.back();
  return {{"scenario", trace.scenario_id},
          {"controller", trace.controller_label},
          {"dt", trace.dt},
          {"rows", trace.rows.size()},
          {"fault_rows", trace.fault_count()},
          {"fault_fraction", trace.fault_fraction()},
          {"max_abs_error", {{"x", max_ex}, {"y", max_ey}}},
          {"final_pose", {{"x", last.pose.x}, {"y", last.pose.y}, {"theta", last.pose.theta},
                          {"theta_wrapped", wrap_angle(last.pose.theta)}}},
          {"metrics", metrics::to_json(report)}};
}

std::string sha256_hex(const std::string& bytes)
{
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += fmt::format("{:02x}", digest[i]);
  }
  return hex;
}

std::string sha256_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

}  // namespace wmr::io
