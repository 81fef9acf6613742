#include "wmr/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "wmr/errors.hpp"
#include "wmr/io.hpp"

namespace wmr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Manifest {
 public:
  Manifest(std::string command, const Context& ctx) : started_(utc_now())
  {
    doc_ = {{"tool", kToolName}, {"version", kToolVersion}, {"command", std::move(command)},
            {"arguments", ctx.arguments}, {"inputs", json::array()}, {"outputs", json::array()}};
  }

  void input(const fs::path& p) { doc_["inputs"].push_back({{"path", p.string()}, {"sha256", io::sha256_file(p)}}); }

  void output(const fs::path& p)
  {
    doc_["outputs"].push_back({{"file", p.filename().string()}, {"sha256", io::sha256_file(p)}});
  }

  void write(const fs::path& out_dir)
  {
    doc_["started_utc"] = started_;
    doc_["finished_utc"] = utc_now();
    io::write_text(out_dir / "manifest.json", doc_.dump(2) + "\n");
  }

 private:
  json doc_;
  std::string started_;
};

template <typename F>
int guarded(Context& ctx, F&& body)
{
  try {
    return body();
  } catch (const ParseError& e) {
    ctx.err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const ScenarioInvalid& e) {
    ctx.err << "validation error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    ctx.err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

Scenario prepare(const fs::path& path, const Overrides& overrides)
{
  Scenario s = io::load_scenario(path);
  apply(overrides, s);
  s.validate();
  return s;
}

void ensure_dir(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
  }
}

std::string file_safe(std::string label)
{
  for (char& c : label) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      c = '_';
    }
  }
  return label;
}

std::vector<double> read_range(const json& ranges, const std::string& key, std::set<std::string>& seen)
{
  seen.insert(key);
  auto it = ranges.find(key);
  if (it == ranges.end()) {
    return {};
  }
  const std::string field = "sweep.ranges." + key;
  if (!it->is_array()) {
    throw ScenarioInvalid(field, "expected an array of numbers");
  }
  if (it->empty()) {
    throw ScenarioInvalid(field, "empty range");
  }
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number()) {
      throw ScenarioInvalid(field, "expected numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

// Scenario file paths inside a sweep spec are relative to the spec.
fs::path resolve(const fs::path& base_file, const fs::path& p)
{
  return p.is_absolute() ? p : base_file.parent_path() / p;
}

}  // namespace

void apply(const Overrides& o, Scenario& s)
{
  if (o.seed) {
    s.seed = *o.seed;
  }
  if (o.dt) {
    s.dt = *o.dt;
  }
  auto patch = [&](NamedController& c) {
    if (auto* inh = std::get_if<control::InhsmcConfig>(&c.config)) {
      if (o.mode) {
        inh->mode = *o.mode;
      }
      if (o.chattering) {
        inh->chattering = *o.chattering;
      }
    } else if (o.chattering) {
      std::get<control::FbsmcConfig>(c.config).chattering = *o.chattering;
    }
  };
  patch(s.controller);
  if (s.baseline) {
    patch(*s.baseline);
  }
}

int cmd_validate(const fs::path& scenario, const Overrides& overrides, Context& ctx)
{
  return guarded(ctx, [&] {
    const Scenario s = prepare(scenario, overrides);
    ctx.out << fmt::format("{}: ok ({} steps of {} s, controller {}{})\n", scenario.string(), s.step_count(), s.dt,
                           s.controller.label, s.baseline ? ", baseline " + s.baseline->label : "");
    return kOk;
  });
}

int cmd_run(const fs::path& scenario, const fs::path& out_dir, const Overrides& overrides, Context& ctx)
{
  return guarded(ctx, [&] {
    const Scenario s = prepare(scenario, overrides);
    Manifest manifest("run", ctx);
    manifest.input(scenario);
    ensure_dir(out_dir);

    const SimTrace trace = run(s);
    const fs::path trace_path = out_dir / "trace.csv";
    io::write_trace_csv(trace, trace_path);
    const json summary = io::summarize(trace);
    const fs::path metrics_path = out_dir / "metrics.json";
    io::write_text(metrics_path, summary.dump(2) + "\n");
    manifest.output(trace_path);
    manifest.output(metrics_path);
    manifest.write(out_dir);

    ctx.out << metrics::render_table(metrics::evaluate(trace));
    if (trace.fault_fraction() > kMaxFaultFraction) {
      ctx.err << fmt::format("run dominated by singularity faults: {} of {} rows\n", trace.fault_count(),
                             trace.rows.size());
      return kFaultDominated;
    }
    return kOk;
  });
}

int cmd_compare(const fs::path& scenario, const fs::path& out_dir, const Overrides& overrides, Context& ctx)
{
  return guarded(ctx, [&] {
    const Scenario s = prepare(scenario, overrides);
    if (!s.baseline) {
      throw ScenarioInvalid("baseline", "compare needs a baseline controller in the scenario");
    }
    Manifest manifest("compare", ctx);
    manifest.input(scenario);
    ensure_dir(out_dir);

    SimTrace baseline;
    std::thread worker([&] { baseline = run(s, *s.baseline); });
    const SimTrace candidate = run(s, s.controller);
    worker.join();

    std::string b_name = file_safe(candidate.controller_label);
    const std::string a_name = file_safe(baseline.controller_label);
    if (b_name == a_name) {
      b_name += "_2";
    }
    using Named = std::pair<const SimTrace*, std::string>;
    for (const auto& [trace, name] : {Named{&baseline, a_name}, Named{&candidate, b_name}}) {
      const fs::path p = out_dir / ("trace_" + name + ".csv");
      io::write_trace_csv(*trace, p);
      manifest.output(p);
    }

    const metrics::ComparisonReport report =
        metrics::compare(metrics::evaluate(baseline), metrics::evaluate(candidate));
    json doc = metrics::to_json(report);
    doc["summaries"] = {io::summarize(baseline), io::summarize(candidate)};
    const fs::path json_path = out_dir / "comparison.json";
    const fs::path text_path = out_dir / "comparison.txt";
    const std::string table = metrics::render_table(report);
    io::write_text(json_path, doc.dump(2) + "\n");
    io::write_text(text_path, table);
    manifest.output(json_path);
    manifest.output(text_path);
    manifest.write(out_dir);

    ctx.out << table;
    if (baseline.fault_fraction() > kMaxFaultFraction || candidate.fault_fraction() > kMaxFaultFraction) {
      ctx.err << "at least one run is dominated by singularity faults\n";
      return kFaultDominated;
    }
    return kOk;
  });
}

int cmd_verify(const fs::path& out_dir, const verify::VerificationOptions& options, Context& ctx)
{
  return guarded(ctx, [&] {
    Manifest manifest("verify", ctx);
    ensure_dir(out_dir);
    const verify::VerificationReport report = verify::run_verification(options);
    const std::string text = report.render();
    const fs::path json_path = out_dir / "verify.json";
    const fs::path text_path = out_dir / "verify.txt";
    io::write_text(json_path, report.to_json().dump(2) + "\n");
    io::write_text(text_path, text);
    manifest.output(json_path);
    manifest.output(text_path);
    manifest.write(out_dir);
    ctx.out << text;
    return report.all_pass() ? kOk : kVerificationFailed;
  });
}

SweepSpec load_sweep(const fs::path& path)
{
  const json doc = io::read_json(path);
  if (!doc.is_object()) {
    throw ScenarioInvalid("sweep", "expected an object");
  }
  static const std::set<std::string> allowed{"scenario", "strategy", "ranges", "samples", "seed", "weights"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) {
      throw ScenarioInvalid("sweep." + key, "unknown key");
    }
  }
  SweepSpec spec;
  if (!doc.contains("scenario") || !doc["scenario"].is_string()) {
    throw ScenarioInvalid("sweep.scenario", "required path to a scenario file");
  }
  spec.scenario = resolve(path, doc["scenario"].get<std::string>());
  const std::string strategy = doc.value("strategy", "grid");
  if (strategy == "grid") {
    spec.strategy = SweepSpec::Strategy::grid;
  } else if (strategy == "random") {
    spec.strategy = SweepSpec::Strategy::random;
  } else {
    throw ScenarioInvalid("sweep.strategy", "expected grid or random");
  }
  if (doc.contains("samples")) {
    if (!doc["samples"].is_number_unsigned() || doc["samples"].get<std::size_t>() == 0) {
      throw ScenarioInvalid("sweep.samples", "expected a positive integer");
    }
    spec.samples = doc["samples"].get<std::size_t>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) {
      throw ScenarioInvalid("sweep.seed", "expected a non-negative integer");
    }
    spec.seed = doc["seed"].get<std::uint64_t>();
  }
  if (!doc.contains("ranges") || !doc["ranges"].is_object()) {
    throw ScenarioInvalid("sweep.ranges", "required object of parameter ranges");
  }
  const json& ranges = doc["ranges"];
  std::set<std::string> seen;
  spec.mu = read_range(ranges, "mu", seen);
  spec.beta = read_range(ranges, "beta", seen);
  spec.upsilon1 = read_range(ranges, "upsilon1", seen);
  spec.upsilon2 = read_range(ranges, "upsilon2", seen);
  for (const auto& [key, value] : ranges.items()) {
    if (!seen.contains(key)) {
      throw ScenarioInvalid("sweep.ranges." + key, "unknown parameter (expected mu, beta, upsilon1, upsilon2)");
    }
  }
  if (spec.strategy == SweepSpec::Strategy::random) {
    for (const auto* r : {&spec.mu, &spec.beta, &spec.upsilon1, &spec.upsilon2}) {
      if (!r->empty() && (r->size() != 2 || !((*r)[0] <= (*r)[1]))) {
        throw ScenarioInvalid("sweep.ranges", "random strategy needs [min, max] pairs");
      }
    }
  }
  if (doc.contains("weights")) {
    const json& w = doc["weights"];
    if (!w.is_object()) {
      throw ScenarioInvalid("sweep.weights", "expected an object");
    }
    for (const auto& [key, value] : w.items()) {
      if (!value.is_number() || value.get<double>() < 0.0) {
        throw ScenarioInvalid("sweep.weights." + key, "expected a non-negative number");
      }
      if (key == "iae") {
        spec.weight_iae = value.get<double>();
      } else if (key == "p_avg") {
        spec.weight_p_avg = value.get<double>();
      } else {
        throw ScenarioInvalid("sweep.weights." + key, "unknown weight (expected iae, p_avg)");
      }
    }
  }
  return spec;
}

std::vector<SweepPoint> expand(const SweepSpec& spec, const control::AxisGains& base)
{
  auto or_base = [](const std::vector<double>& r, double v) { return r.empty() ? std::vector<double>{v} : r; };
  std::vector<SweepPoint> points;
  if (spec.strategy == SweepSpec::Strategy::grid) {
    for (double mu : or_base(spec.mu, base.mu)) {
      for (double beta : or_base(spec.beta, base.beta)) {
        for (double u1 : or_base(spec.upsilon1, base.upsilon1)) {
          for (double u2 : or_base(spec.upsilon2, base.upsilon2)) {
            points.push_back({mu, beta, u1, u2});
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(spec.seed);
    auto draw = [&](const std::vector<double>& r, double v) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      return r.empty() ? v : r[0] + (r[1] - r[0]) * u;
    };
    for (std::size_t i = 0; i < spec.samples; ++i) {
      SweepPoint p;
      p.mu = draw(spec.mu, base.mu);
      p.beta = draw(spec.beta, base.beta);
      p.upsilon1 = draw(spec.upsilon1, base.upsilon1);
      p.upsilon2 = draw(spec.upsilon2, base.upsilon2);
      points.push_back(p);
    }
  }
  for (const auto& p : points) {
    control::AxisGains g = base;
    g.mu = p.mu;
    g.beta = p.beta;
    g.upsilon1 = p.upsilon1;
    g.upsilon2 = p.upsilon2;
    g.validate("sweep.ranges");
  }
  return points;
}

std::vector<SweepResult> run_sweep(const Scenario& scenario, const SweepSpec& spec)
{
  const auto* inh = std::get_if<control::InhsmcConfig>(&scenario.controller.config);
  if (inh == nullptr) {
    throw ScenarioInvalid("controller.type", "sweeps need an inhsmc controller");
  }
  const std::vector<SweepPoint> points = expand(spec, inh->gains.x);
  std::vector<SweepResult> results(points.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      NamedController c = scenario.controller;
      auto& cfg = std::get<control::InhsmcConfig>(c.config);
      for (auto* g : {&cfg.gains.x, &cfg.gains.y}) {
        g->mu = points[i].mu;
        g->beta = points[i].beta;
        g->upsilon1 = points[i].upsilon1;
        g->upsilon2 = points[i].upsilon2;
      }
      c.label = fmt::format("p{}", i);
      results[i].point = points[i];
      const SimTrace trace = run(scenario, c);
      results[i].report = metrics::evaluate(trace);
      results[i].effort = metrics::virtual_effort(trace);
      results[i].objective = spec.weight_iae * (results[i].report.iae_x + results[i].report.iae_y) +
                             spec.weight_p_avg * results[i].report.p_avg;
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(points.size(), 1));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) {
    pool.emplace_back(worker);
  }
  worker();
  pool.clear();

  std::stable_sort(results.begin(), results.end(),
                   [](const SweepResult& a, const SweepResult& b) { return a.objective < b.objective; });
  return results;
}

json sweep_trends(const std::vector<SweepResult>& results)
{
  json out = json::object();
  const std::pair<const char*, double SweepPoint::*> params[] = {
      {"mu", &SweepPoint::mu}, {"beta", &SweepPoint::beta}, {"upsilon1", &SweepPoint::upsilon1},
      {"upsilon2", &SweepPoint::upsilon2}};
  for (const auto& [name, member] : params) {
    struct Level {
      double p_avg = 0.0, effort = 0.0, iae = 0.0;
      int n = 0;
    };
    std::map<double, Level> levels;
    for (const auto& r : results) {
      Level& l = levels[r.point.*member];
      l.p_avg += r.report.p_avg;
      l.effort += r.effort;
      l.iae += r.report.iae_x + r.report.iae_y;
      ++l.n;
    }
    if (levels.size() < 2) {
      continue;
    }
    json rows = json::array();
    bool p_up = true;
    bool effort_up = true;
    double prev_p = -1.0;
    double prev_effort = -1.0;
    for (const auto& [value, l] : levels) {
      const double p = l.p_avg / l.n;
      const double eff = l.effort / l.n;
      p_up = p_up && p >= prev_p;
      effort_up = effort_up && eff >= prev_effort;
      prev_p = p;
      prev_effort = eff;
      rows.push_back({{"value", value}, {"mean_p_avg", p}, {"mean_effort", eff}, {"mean_iae", l.iae / l.n}});
    }
    out[name] = {{"levels", rows}, {"p_avg_nondecreasing", p_up}, {"effort_nondecreasing", effort_up}};
  }
  return out;
}

int cmd_sweep(const fs::path& sweep_spec, const fs::path& out_dir, const Overrides& overrides, Context& ctx)
{
  return guarded(ctx, [&] {
    const SweepSpec spec = load_sweep(sweep_spec);
    const Scenario s = prepare(spec.scenario, overrides);
    Manifest manifest("sweep", ctx);
    manifest.input(sweep_spec);
    manifest.input(spec.scenario);
    ensure_dir(out_dir);

    const std::vector<SweepResult> results = run_sweep(s, spec);

    std::string csv = "rank,mu,beta,upsilon1,upsilon2,iae_x,iae_y,ise_x,ise_y,p_avg,effort,objective\n";
    std::string table =
        fmt::format("{:>4} {:>8} {:>8} {:>9} {:>9} {:>12} {:>12} {:>10} {:>12} {:>12}\n", "rank", "mu", "beta",
                    "upsilon1", "upsilon2", "IAE_x", "IAE_y", "P_avg", "effort", "objective");
    json rows = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", i + 1, r.point.mu, r.point.beta, r.point.upsilon1,
                         r.point.upsilon2, r.report.iae_x, r.report.iae_y, r.report.ise_x, r.report.ise_y,
                         r.report.p_avg, r.effort, r.objective);
      table += fmt::format(
          "{:>4} {:>8.4g} {:>8.4g} {:>9.4g} {:>9.4g} {:>12.6g} {:>12.6g} {:>10.6g} {:>12.6g} {:>12.6g}\n", i + 1,
          r.point.mu, r.point.beta, r.point.upsilon1, r.point.upsilon2, r.report.iae_x, r.report.iae_y,
          r.report.p_avg, r.effort, r.objective);
      json m = metrics::to_json(r.report);
      m["rank"] = i + 1;
      m["mu"] = r.point.mu;
      m["beta"] = r.point.beta;
      m["upsilon1"] = r.point.upsilon1;
      m["upsilon2"] = r.point.upsilon2;
      m["effort"] = r.effort;
      m["objective"] = r.objective;
      rows.push_back(m);
    }
    const json trends = sweep_trends(results);
    const json doc = {{"scenario", s.id},
                      {"objective", fmt::format("{} * (IAE_x + IAE_y) + {} * P_avg", spec.weight_iae,
                                                spec.weight_p_avg)},
                      {"results", rows},
                      {"trends", trends},
                      {"p_avg_definition", metrics::kPavgNote},
                      {"effort_definition", "(1/T) * integral of |v_c|^2 dt, v_c the flat-space controller output"}};
    const fs::path csv_path = out_dir / "sweep.csv";
    const fs::path json_path = out_dir / "sweep.json";
    io::write_text(csv_path, csv);
    io::write_text(json_path, doc.dump(2) + "\n");
    manifest.output(csv_path);
    manifest.output(json_path);
    manifest.write(out_dir);

    ctx.out << table;
    for (const auto& [name, t] : trends.items()) {
      auto word = [](bool up) { return up ? "nondecreasing" : "not nondecreasing"; };
      ctx.out << fmt::format("trend {}: P_avg {}, effort {}\n", name, word(t["p_avg_nondecreasing"].get<bool>()),
                             word(t["effort_nondecreasing"].get<bool>()));
    }
    return kOk;
  });
}

}  // namespace wmr::cli
