#include "stationary/runner.hpp"

#include "stationary/expr.hpp"
#include "stationary/gallery.hpp"
#include "stationary/lightlike.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace stationary::runner {

using json = nlohmann::json;

namespace {

// ---------------------------------------------------------------- parsing

constexpr std::pair<Kind, std::string_view> kKinds[] = {
    {Kind::ScatterBatch, "scatter-batch"},         {Kind::EquivalenceCheck, "equivalence-check"},
    {Kind::GaugeInvariance, "gauge-invariance"},   {Kind::SimplicityAudit, "simplicity-audit"},
    {Kind::LightlikeBatch, "lightlike-batch"},     {Kind::ConservationSweep, "conservation-sweep"},
};

[[noreturn]] void config_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::ConfigError, path + ": " + message);
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) config_error(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      std::string allowed;
      for (auto k : keys) allowed += (allowed.empty() ? "" : ", ") + std::string(k);
      config_error(path + "." + key, "unknown field (allowed: " + allowed + ")");
    }
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& path, int min_value) {
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  const auto i = v.get<long long>();
  if (i < min_value) config_error(path, "must be at least " + std::to_string(min_value));
  return static_cast<int>(i);
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) config_error(path, "expected true or false");
  return v.get<bool>();
}

std::string string(const json& v, const std::string& path) {
  if (!v.is_string()) config_error(path, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) config_error(path, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Vector vector_of(const json& v, const std::string& path, Eigen::Index dim) {
  const auto xs = numbers(v, path);
  if (static_cast<Eigen::Index>(xs.size()) != dim) config_error(path, "expected " + std::to_string(dim) + " components");
  return Eigen::Map<const Vector>(xs.data(), dim);
}

/// A number is a constant; otherwise a list of terms
/// {"c": coeff, "pow": [..], "trig": "sin"|"cos", "freq": [..], "phase": p}.
Expr<double> expression(const json& v, const std::string& path, int dim) {
  if (v.is_number()) return Expr<double>::constant(v.get<double>());
  if (!v.is_array()) config_error(path, "expected a number or a list of terms");
  std::vector<Term<double>> terms;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string tp = path + "[" + std::to_string(i) + "]";
    const json& t = v[i];
    allow_keys(t, tp, {"c", "pow", "trig", "freq", "phase"});
    Term<double> term;
    term.coeff = t.contains("c") ? number(t["c"], tp + ".c") : 1.0;
    if (t.contains("pow")) {
      if (!t["pow"].is_array() || static_cast<int>(t["pow"].size()) != dim) config_error(tp + ".pow", "expected " + std::to_string(dim) + " exponents");
      for (std::size_t k = 0; k < t["pow"].size(); ++k) term.powers.push_back(integer(t["pow"][k], tp + ".pow", 0));
    }
    if (t.contains("trig")) {
      const std::string trig = string(t["trig"], tp + ".trig");
      if (trig == "sin") term.trig = Trig::Sin;
      else if (trig == "cos") term.trig = Trig::Cos;
      else if (trig != "none") config_error(tp + ".trig", "expected sin, cos or none");
      if (term.trig != Trig::None) {
        if (!t.contains("freq")) config_error(tp + ".freq", "required for trigonometric terms");
        const Vector k = vector_of(t["freq"], tp + ".freq", dim);
        term.freq.assign(k.data(), k.data() + dim);
        term.phase = t.contains("phase") ? number(t["phase"], tp + ".phase") : 0.0;
      }
    }
    terms.push_back(std::move(term));
  }
  return Expr<double>(std::move(terms));
}

/// Upper triangle given row by row, as for metric_from.
MetricField<double> metric(const json& v, const std::string& path, int dim) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) config_error(path, "expected " + std::to_string(dim) + " rows");
  std::vector<std::vector<Expr<double>>> rows;
  for (int i = 0; i < dim; ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim - i) config_error(rp, "row " + std::to_string(i) + " must hold " + std::to_string(dim - i) + " entries");
    std::vector<Expr<double>> r;
    for (int j = 0; j < dim - i; ++j) r.push_back(expression(row[static_cast<std::size_t>(j)], rp + "[" + std::to_string(j) + "]", dim));
    rows.push_back(std::move(r));
  }
  return metric_from<double>(rows);
}

CovectorField<double> covector(const json& v, const std::string& path, int dim) {
  if (!v.is_array() || static_cast<int>(v.size()) != dim) config_error(path, "expected " + std::to_string(dim) + " components");
  std::vector<Expr<double>> comps;
  for (int i = 0; i < dim; ++i) comps.push_back(expression(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]", dim));
  return covector_from<double>(comps);
}

ManifoldSource manifold(const json& v, const std::string& path) {
  ManifoldSource out;
  if (v.is_string()) {
    out.gallery = v.get<std::string>();
  } else {
    allow_keys(v, path, {"gallery", "parameter", "inline"});
    if (v.contains("gallery") == v.contains("inline")) config_error(path, "give exactly one of gallery or inline");
    if (v.contains("gallery")) {
      out.gallery = string(v["gallery"], path + ".gallery");
      if (v.contains("parameter")) out.parameter = number(v["parameter"], path + ".parameter");
    }
  }
  try {
    if (out.gallery) {
      out.label = *out.gallery;
      try {
        out.spec = gallery_spec(*out.gallery, out.parameter);
      } catch (const Error& e) {
        config_error(path, e.what());
      }
      return out;
    }
    const std::string ip = path + ".inline";
    const json& in = v["inline"];
    allow_keys(in, ip, {"name", "dim", "radius", "h", "omega", "lambda", "tilde"});
    const int dim = in.contains("dim") ? integer(in["dim"], ip + ".dim", 1) : 2;
    const double radius = in.contains("radius") ? number(in["radius"], ip + ".radius") : 1.0;
    for (const char* key : {"h", "omega", "lambda"})
      if (!in.contains(key)) config_error(ip + "." + key, "required");
    out.label = in.contains("name") ? string(in["name"], ip + ".name") : "inline";
    auto h = metric(in["h"], ip + ".h", dim);
    auto w = covector(in["omega"], ip + ".omega", dim);
    auto lam = expression(in["lambda"], ip + ".lambda", dim).field();
    if (in.contains("tilde") && boolean(in["tilde"], ip + ".tilde")) {
      out.spec = convert_tilde(TildeSpec<double>{out.label, unit_ball<double>(dim, radius), h, w, lam});
    } else {
      out.spec = Spec{out.label, unit_ball<double>(dim, radius), h, w, lam};
      validate(out.spec);
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    config_error(path, e.what());
  }
  return out;
}

GaugeParams gauge(const json& v, const std::string& path, int dim) {
  allow_keys(v, path, {"epsilon", "shift", "rotation", "q", "mu_scale"});
  GaugeParams g;
  if (v.contains("epsilon")) g.epsilon = number(v["epsilon"], path + ".epsilon");
  if (v.contains("shift")) g.shift = vector_of(v["shift"], path + ".shift", dim);
  if (v.contains("rotation")) {
    const json& r = v["rotation"];
    if (!r.is_array() || static_cast<int>(r.size()) != dim) config_error(path + ".rotation", "expected a square matrix");
    g.rotation.resize(dim, dim);
    for (int i = 0; i < dim; ++i) g.rotation.row(i) = vector_of(r[static_cast<std::size_t>(i)], path + ".rotation", dim).transpose();
  }
  g.q = v.contains("q") ? expression(v["q"], path + ".q", dim) : Expr<double>::constant(0.0);
  if (v.contains("mu_scale")) g.mu_scale = number(v["mu_scale"], path + ".mu_scale");
  return g;
}

ExperimentConfig experiment(const json& v, const std::string& path, std::size_t index) {
  allow_keys(v, path, {"name", "kind", "manifold", "rho", "m", "samples", "seed", "tolerances", "horizon",
                       "allow_inadmissible", "gauge", "control", "shooting_checks", "boundary", "sweep"});
  ExperimentConfig e;
  e.name = v.contains("name") ? string(v["name"], path + ".name") : "experiment-" + std::to_string(index);
  if (e.name.empty() || e.name.find_first_of("/\\") != std::string::npos) config_error(path + ".name", "must be a plain directory name");
  if (!v.contains("kind")) config_error(path + ".kind", "required");
  const auto kind = parse_kind(string(v["kind"], path + ".kind"));
  if (!kind) config_error(path + ".kind", "unknown experiment kind '" + v["kind"].get<std::string>() + "'");
  e.kind = *kind;
  if (!v.contains("manifold")) config_error(path + ".manifold", "required");
  e.manifold = manifold(v["manifold"], path + ".manifold");
  const int dim = e.manifold.spec.dim();

  if (v.contains("rho")) e.rho = numbers(v["rho"], path + ".rho");
  if (e.kind == Kind::LightlikeBatch) {
    if (!e.rho.empty() && (e.rho.size() != 1 || e.rho[0] != -1.0)) config_error(path + ".rho", "lightlike batches use rho = -1");
    e.rho = {-1.0};
    e.m = 0.0;
  } else if (e.rho.empty()) {
    config_error(path + ".rho", "required");
  }
  for (double r : e.rho)
    if (r == 0.0) config_error(path + ".rho", "momentum must be nonzero");
  if (v.contains("m")) {
    if (e.kind == Kind::LightlikeBatch) config_error(path + ".m", "lightlike batches have m = 0");
    e.m = number(v["m"], path + ".m");
    if (!(e.m > 0)) config_error(path + ".m", "mass must be positive");
  }
  if (v.contains("samples")) e.samples = integer(v["samples"], path + ".samples", 1);
  if (v.contains("seed")) e.seed = static_cast<unsigned>(integer(v["seed"], path + ".seed", 0));
  if (v.contains("tolerances")) {
    const json& t = v["tolerances"];
    allow_keys(t, path + ".tolerances", {"abs", "rel"});
    if (t.contains("abs")) e.tol.atol = number(t["abs"], path + ".tolerances.abs");
    if (t.contains("rel")) e.tol.rtol = number(t["rel"], path + ".tolerances.rel");
  }
  if (v.contains("horizon")) e.horizon = number(v["horizon"], path + ".horizon");
  if (v.contains("allow_inadmissible")) e.allow_inadmissible = boolean(v["allow_inadmissible"], path + ".allow_inadmissible");
  if (v.contains("gauge")) e.gauge = gauge(v["gauge"], path + ".gauge", dim);
  if (v.contains("control")) e.control = boolean(v["control"], path + ".control");
  if (v.contains("shooting_checks")) e.shooting_checks = integer(v["shooting_checks"], path + ".shooting_checks", 0);
  if (v.contains("boundary")) {
    const json& b = v["boundary"];
    allow_keys(b, path + ".boundary", {"points", "directions", "offset"});
    if (b.contains("points")) e.sampling.points = integer(b["points"], path + ".boundary.points", 1);
    if (b.contains("directions")) e.sampling.directions = integer(b["directions"], path + ".boundary.directions", 1);
    if (b.contains("offset")) e.sampling.angle_offset = number(b["offset"], path + ".boundary.offset");
  }
  if (v.contains("sweep")) {
    const std::string sp = path + ".sweep";
    const json& s = v["sweep"];
    allow_keys(s, sp, {"values", "x", "y", "expect_transition"});
    if (!e.manifold.gallery) config_error(sp, "sweeps vary a gallery parameter");
    SweepConfig sw;
    if (!s.contains("values")) config_error(sp + ".values", "required");
    sw.values = numbers(s["values"], sp + ".values");
    if (sw.values.empty()) config_error(sp + ".values", "needs at least one value");
    if (!s.contains("x") || !s.contains("y")) config_error(sp, "x and y are required");
    sw.x = vector_of(s["x"], sp + ".x", dim);
    sw.y = vector_of(s["y"], sp + ".y", dim);
    if (s.contains("expect_transition")) sw.expect_transition = boolean(s["expect_transition"], sp + ".expect_transition");
    e.sweep = std::move(sw);
  }
  return e;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// ---------------------------------------------------------------- output

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string brief(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : columns_(header.size()) { add(header); }

  class Row {
   public:
    Row& operator<<(double v) {
      cells_.push_back(fmt(v));
      return *this;
    }
    Row& operator<<(int v) {
      cells_.push_back(std::to_string(v));
      return *this;
    }
    Row& operator<<(const std::string& s) {
      cells_.push_back(csv_field(s));
      return *this;
    }
    Row& operator<<(const Vector& v) {
      for (Eigen::Index i = 0; i < v.size(); ++i) cells_.push_back(fmt(v(i)));
      return *this;
    }
    std::vector<std::string> cells_;
  };

  void add(const Row& r) { add(r.cells_); }

  void write(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + file.string());
    out << text_;
  }

 private:
  void add(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) text_ += (i ? "," : "") + cells[i];
    text_ += '\n';
  }

  std::size_t columns_;
  std::string text_;
};

std::vector<std::string> indexed(const std::string& stem, int dim) {
  std::vector<std::string> out;
  for (int i = 0; i < dim; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

std::vector<std::string> header(std::initializer_list<std::vector<std::string>> parts) {
  std::vector<std::string> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

// ---------------------------------------------------------------- helpers

/// Work items evaluated by `jobs` threads; results keep their index order.
template <typename T>
std::vector<T> parallel_map(int count, int jobs, const std::function<T(int)>& f) {
  std::vector<T> out(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) out[static_cast<std::size_t>(i)] = f(i);
  };
  const int width = std::clamp(jobs, 1, std::max(count, 1));
  if (width == 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < width; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

Assertion at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, "<=", threshold, value <= threshold};
}

Assertion at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, ">=", threshold, value >= threshold};
}

Assertion above(std::string name, double value, double threshold) {
  return {std::move(name), value, ">", threshold, value > threshold};
}

std::string rho_tag(double rho) { return "rho=" + fmt(rho); }

FlowOptions flow_options(const ExperimentConfig& c) {
  FlowOptions o;
  o.tol = c.tol;
  return o;
}

/// Entry 0 is the diametral entry from the boundary point in direction
/// -e_1 with no tangential part; the rest are seeded samples.
std::vector<BoundaryTangent> entries_for(const ExperimentConfig& c, double rho) {
  const Spec& s = c.manifold.spec;
  const int dim = s.dim();
  std::vector<BoundaryTangent> out;
  BoundaryTangent first;
  first.x = boundary_point<double>(s.domain, Vector(-Vector::Unit(dim, 0)));
  first.t = 0;
  first.vt = -rho;
  first.vx = Vector::Zero(dim);
  out.push_back(first);
  if (c.samples > 1) {
    auto rest = sample_entries(s, rho, c.m, c.samples - 1, c.seed);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

void check_band(const ExperimentConfig& c, ExperimentResult& res) {
  if (c.kind == Kind::LightlikeBatch) return;
  const auto band = admissible_band(c.manifold.spec, c.m);
  for (double rho : c.rho) {
    const auto r = band.with_rho(rho);
    if (!r.band_ok && !c.allow_inadmissible) {
      throw Error(ErrorCode::ConfigError, rho_tag(rho) + " lies outside the admissible band " + band.band() +
                                              " (set allow_inadmissible to override)");
    }
    if (!r.band_ok) res.notes.push_back(rho_tag(rho) + " is outside the admissible band; override in effect");
  }
}

void add_record_columns(Csv::Row& row, const ScatteringRecord& r) {
  row << r.entry.x << r.entry.vt << r.entry.vx << r.exit.x << r.exit.t << r.exit.vt << r.exit.vx << r.T << r.time_shift
      << r.action << (r.grazing ? 1 : 0);
}

std::vector<std::string> record_header(int dim) {
  return header({{"index", "rho", "m"}, indexed("entry_x", dim), {"entry_vt"}, indexed("entry_vx", dim), indexed("exit_x", dim),
                 {"exit_t", "exit_vt"}, indexed("exit_vx", dim), {"T", "time_shift", "action", "grazing", "status"}});
}

void add_failed_record(Csv::Row& row, int dim) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < 4 * dim + 7; ++i) row << nan;
}

struct ScatterRow {
  std::optional<ScatteringRecord> record;
  std::string status = "ok";
};

// ---------------------------------------------------------------- experiments

void scatter_batch(const ExperimentConfig& c, const RunOptions& opts, const std::filesystem::path& dir, ExperimentResult& res) {
  const Spec& s = c.manifold.spec;
  const int dim = s.dim();
  Csv csv(record_header(dim));
  double parts = 0, orth = 0, tag = 0;
  int failures = 0, computed = 0;
  for (double rho : c.rho) {
    const auto entries = entries_for(c, rho);
    const auto rows = parallel_map<ScatterRow>(static_cast<int>(entries.size()), opts.jobs, [&](int i) {
      ScatterRow r;
      try {
        r.record = scattering_rho_m(s, rho, c.m, entries[static_cast<std::size_t>(i)], flow_options(c));
      } catch (const Error& e) {
        r.status = e.what();
      }
      return r;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Csv::Row row;
      row << static_cast<int>(i) << rho << c.m;
      if (const auto& rec = rows[i].record) {
        ++computed;
        add_record_columns(row, *rec);
        parts = std::max(parts, std::abs(rec->action - rec->action_from_parts()));
        const Vector nu = outward_normal(s.h, s.domain, rec->exit.x);
        orth = std::max(orth, std::abs(rec->exit.vx.dot(s.h(rec->exit.x) * nu)));
        tag = std::max(tag, std::abs(rec->exit.vt + rho) / (1.0 + std::abs(rho)));
      } else {
        ++failures;
        add_failed_record(row, dim);
      }
      row << rows[i].status;
      csv.add(row);
    }
  }
  csv.write(dir / "records.csv");
  res.files.push_back(res.name + "/records.csv");
  res.assertions.push_back(at_least("records_computed", computed, 1));
  res.assertions.push_back(at_most("entry_failures", failures, 0));
  res.assertions.push_back(at_most("action_from_parts", parts, 1e-9));
  res.assertions.push_back(at_most("exit_tangent_orthogonality", orth, 1e-10));
  res.assertions.push_back(at_most("exit_momentum_tag", tag, 1e-8));
}

struct EquivalenceRow {
  std::optional<ScatteringRecord> direct, rebuilt;
  double mp_action = 0;
  double lift_time = 0;
  double shooting_action = std::numeric_limits<double>::quiet_NaN();
  double shooting_via_lift = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

void equivalence_check(const ExperimentConfig& c, const RunOptions& opts, const std::filesystem::path& dir, ExperimentResult& res) {
  const Spec& s = c.manifold.spec;
  const int dim = s.dim();
  Csv records(record_header(dim));
  Csv devs({"index", "rho", "dev_exit_point", "dev_exit_tangent", "dev_T", "dev_time_shift", "dev_action", "action_direct",
            "action_time_free", "action_gap", "shooting_action", "shooting_gap", "status"});
  double worst = 0, action_gap = 0, shooting_gap = 0;
  int failures = 0, shot = 0;
  for (double rho : c.rho) {
    const MPSystem sys = reduce(s, rho, c.m);
    const auto entries = entries_for(c, rho);
    const auto rows = parallel_map<EquivalenceRow>(static_cast<int>(entries.size()), opts.jobs, [&](int i) {
      EquivalenceRow r;
      const auto& e = entries[static_cast<std::size_t>(i)];
      try {
        r.direct = scattering_rho_m(s, rho, c.m, e, flow_options(c));
        const auto mp = scattering_mp(sys, e, flow_options(c));
        r.mp_action = mp.action;
        r.lift_time = mp.lift_time;
        r.rebuilt = reconstruct_S_rho_m(sys, c.m, mp, mp.action, e);
        if (i < c.shooting_checks) {
          const auto a = action_boundary(sys, c.m, e.x, mp.exit.x);
          r.shooting_action = a.value;
          r.shooting_via_lift = a.via_lift;
        }
      } catch (const Error& err) {
        r.status = err.what();
        r.direct.reset();
      }
      return r;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      Csv::Row rec, dev;
      rec << static_cast<int>(i) << rho << c.m;
      dev << static_cast<int>(i) << rho;
      if (r.direct) {
        add_record_columns(rec, *r.direct);
        const auto& a = *r.direct;
        const auto& b = *r.rebuilt;
        const double dp = (a.exit.x - b.exit.x).cwiseAbs().maxCoeff();
        const double dt = std::max((a.exit.vx - b.exit.vx).cwiseAbs().maxCoeff(), std::abs(a.exit.vt - b.exit.vt));
        const double dT = std::abs(a.T - b.T), ds = std::abs(a.time_shift - b.time_shift), dA = std::abs(a.action - b.action);
        worst = std::max({worst, dp, dt, dT, ds, dA, std::abs(a.exit.t - b.exit.t)});
        const double gap = std::abs(a.action - r.mp_action);
        action_gap = std::max(action_gap, gap);
        double sgap = std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(r.shooting_action)) {
          sgap = std::max(std::abs(r.shooting_action - a.action), std::abs(r.shooting_via_lift - a.action));
          shooting_gap = std::max(shooting_gap, sgap);
          ++shot;
        }
        dev << dp << dt << dT << ds << dA << a.action << r.mp_action << gap << r.shooting_action << sgap;
      } else {
        ++failures;
        add_failed_record(rec, dim);
        for (int k = 0; k < 10; ++k) dev << std::numeric_limits<double>::quiet_NaN();
      }
      rec << r.status;
      dev << r.status;
      records.add(rec);
      devs.add(dev);
    }
  }
  records.write(dir / "records.csv");
  devs.write(dir / "deviations.csv");
  res.files.push_back(res.name + "/records.csv");
  res.files.push_back(res.name + "/deviations.csv");
  res.assertions.push_back(at_most("entry_failures", failures, 0));
  res.assertions.push_back(at_most("reconstruction_deviation", worst, 1e-6));
  res.assertions.push_back(at_most("action_vs_time_free_integral", action_gap, 1e-7));
  if (c.shooting_checks > 0) res.assertions.push_back(at_most("action_by_shooting", shooting_gap, 1e-7));
  res.notes.push_back("entries compared by shooting: " + std::to_string(shot));
}

Spec perturbed_lapse(const Spec& s) {
  Spec out = s;
  out.name = s.name + "+lapse-perturbation";
  const auto lam = s.lambda;
  const auto b = s.domain.b;
  out.lambda = ScalarField<double>{[lam, b](const Vector& x) { return lam(x) * (1.0 + 0.1 * b(x)); }, {}};
  return out;
}

void gauge_invariance(const ExperimentConfig& c, const RunOptions& opts, const std::filesystem::path& dir, ExperimentResult& res) {
  const Spec& s = c.manifold.spec;
  const GaugeParams params = c.gauge.value_or(GaugeParams{});
  const GaugeTransform g = boundary_fixing_gauge(s.domain, params);
  validate_gauge(g, s.domain);
  const bool unit_mu = params.mu_scale == 0.0;
  if (!unit_mu) res.notes.push_back("mu != 1: deviations are reported, invariance is not asserted");

  Csv csv({"index", "rho", "comparison", "dev_exit_point", "dev_exit_tangent", "dev_T", "dev_time_shift", "dev_action", "outcome"});
  double traces = 0, gauge_dev = 0, control_dev = 0;
  int mismatched = 0, compared = 0;
  for (double rho : c.rho) {
    const Spec b = apply_gauge_ssm(s, g, rho, c.m);
    traces = std::max(traces, compare_boundary_traces(s, b).worst());
    if (unit_mu) psi_pullback(s, g, rho);
    const auto entries = entries_for(c, rho);
    auto run_pair = [&](const Spec& other, const std::string& label, double& worst) {
      const int n = static_cast<int>(entries.size());
      const auto devs = parallel_map<EntryDeviation>(n, opts.jobs, [&](int i) {
        return scattering_deviations(s, other, rho, c.m, {entries[static_cast<std::size_t>(i)]}, flow_options(c)).front();
      });
      for (int i = 0; i < n; ++i) {
        const auto& d = devs[static_cast<std::size_t>(i)];
        Csv::Row row;
        row << i << rho << label << d.exit_point << d.exit_tangent << d.T << d.time_shift << d.action;
        switch (d.outcome) {
          case EntryOutcome::Compared:
            row << std::string("compared");
            worst = std::max(worst, d.max());
            if (label == "gauge") ++compared;
            break;
          case EntryOutcome::BothFailed: row << "both failed: " + d.error_a; break;
          case EntryOutcome::OneFailed:
            row << "one failed: " + (d.error_a.empty() ? d.error_b : d.error_a);
            if (label == "gauge") ++mismatched;
            break;
        }
        csv.add(row);
      }
    };
    run_pair(b, "gauge", gauge_dev);
    if (c.control) run_pair(perturbed_lapse(s), "control", control_dev);
  }
  csv.write(dir / "deviations.csv");
  res.files.push_back(res.name + "/deviations.csv");
  res.assertions.push_back(at_most("boundary_traces", traces, 1e-8));
  res.assertions.push_back(at_least("entries_compared", compared, 1));
  if (unit_mu) {
    res.assertions.push_back(at_most("mismatched_entries", mismatched, 0));
    res.assertions.push_back(at_most("gauge_deviation", gauge_dev, 1e-5));
  } else {
    res.notes.push_back("max gauge deviation " + fmt(gauge_dev));
  }
  if (c.control) res.assertions.push_back(at_least("control_deviation", control_dev, 1e-3));
}

void simplicity_audit(const ExperimentConfig& c, const RunOptions& opts, const std::filesystem::path& dir, ExperimentResult& res) {
  const Spec& s = c.manifold.spec;
  const int dim = s.dim();
  const auto band = admissible_band(s, c.m);
  Csv bands({"rho", "m", "lambda_min", "lambda_max", "threshold", "margin", "band_ok"});
  Csv margins(header({{"rho"}, indexed("x", dim), indexed("xi", dim), {"pi", "force", "potential", "margin"}}));
  Csv bridge(header({{"rho"}, indexed("x", dim), {"v0"}, indexed("vx", dim), {"lorentzian", "mp", "difference"}}));
  for (double rho : c.rho) {
    const auto r = band.with_rho(rho);
    Csv::Row brow;
    brow << rho << c.m << r.lambda_min << r.lambda_max << r.threshold() << r.margin << (r.band_ok ? 1 : 0);
    bands.add(brow);
    res.assertions.push_back(above("band_margin[" + rho_tag(rho) + "]", r.margin, 0.0));

    const auto conv = mp_convexity(reduce(s, rho, c.m), c.sampling);
    for (const auto& sm : conv.samples) {
      Csv::Row row;
      row << rho << sm.x << sm.xi << sm.pi << sm.force << sm.potential << sm.margin;
      margins.add(row);
    }
    res.assertions.push_back(above("mp_convexity_margin[" + rho_tag(rho) + "]", conv.min_margin, 0.0));

    const auto br = lorentzian_convexity_bridge(s, rho, c.m, c.sampling);
    for (const auto& row_data : br.rows) {
      Csv::Row row;
      row << rho << row_data.x << row_data.v << row_data.lorentzian << row_data.mp << row_data.lorentzian - row_data.mp;
      bridge.add(row);
    }
    if (br.applicable) {
      res.assertions.push_back(at_most("bridge_sign_disagreements[" + rho_tag(rho) + "]", br.signs_agree ? 0 : 1, 0));
      res.assertions.push_back(at_most("bridge_difference[" + rho_tag(rho) + "]", br.max_abs_diff, 1e-8));
    } else {
      res.notes.push_back("bridge not applicable at " + rho_tag(rho) + ": max |<omega, v_x>| = " + fmt(br.max_omega_tangent));
    }
  }
  bands.write(dir / "band.csv");
  margins.write(dir / "convexity.csv");
  bridge.write(dir / "bridge.csv");
  for (const char* f : {"band.csv", "convexity.csv", "bridge.csv"}) res.files.push_back(res.name + "/" + f);

  if (c.sweep) {
    const auto& sw = *c.sweep;
    const double rho = c.rho.front();
    struct SweepRow {
      int solutions = 0;
      bool not_simple = false;
      double shortest = 0, condition = 0;
      std::string status = "ok";
    };
    const auto rows = parallel_map<SweepRow>(static_cast<int>(sw.values.size()), opts.jobs, [&](int i) {
      SweepRow r;
      try {
        const auto sys = reduce(gallery_spec(*c.manifold.gallery, sw.values[static_cast<std::size_t>(i)]), rho, c.m);
        const auto rep = shoot_connect(sys, sw.x, sw.y, sys.k);
        r.solutions = static_cast<int>(rep.solutions.size());
        r.not_simple = rep.not_simple;
        r.shortest = rep.best().s;
        r.condition = rep.best().condition;
      } catch (const Error& e) {
        r.status = e.what();
      }
      return r;
    });
    Csv csv({"parameter", "rho", "solutions", "not_simple", "shortest_time", "condition", "status"});
    double last_simple = std::numeric_limits<double>::quiet_NaN(), first_not = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Csv::Row row;
      row << sw.values[i] << rho << rows[i].solutions << (rows[i].not_simple ? 1 : 0) << rows[i].shortest << rows[i].condition
          << rows[i].status;
      csv.add(row);
      if (rows[i].solutions == 1) last_simple = sw.values[i];
      if (rows[i].not_simple && std::isnan(first_not)) first_not = sw.values[i];
    }
    csv.write(dir / "sweep.csv");
    res.files.push_back(res.name + "/sweep.csv");
    if (sw.expect_transition) {
      const bool first_simple = rows.front().solutions == 1 && !rows.front().not_simple;
      const bool last_not = rows.back().not_simple;
      res.assertions.push_back(at_least("sweep_first_value_simple", first_simple ? 1 : 0, 1));
      res.assertions.push_back(at_least("sweep_last_value_not_simple", last_not ? 1 : 0, 1));
    }
    if (std::isfinite(first_not)) {
      res.notes.push_back("NotSimple first detected at parameter " + fmt(first_not) + "; last simple value " + fmt(last_simple));
    }
  }
}

/// Null state at x along dir with the future-pointing branch.
SpacetimeState null_state(const Spec& s, const Vector& x, const Vector& dir) {
  return {0, x, s.omega(x).dot(dir) + std::sqrt(dir.dot(s.h(x) * dir)) * std::sqrt(s.lambda(x)) / s.lambda(x), dir, 0};
}

Vector random_point(const Domain<double>& d, std::mt19937_64& rng, double fraction = 0.95) {
  // rejection inside the ball of radius `fraction` times the domain size, shrunk until in N
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto n = d.center.size();
  for (;;) {
    Vector p(n);
    for (Eigen::Index i = 0; i < n; ++i) p(i) = u(rng);
    if (p.norm() > 1.0) continue;
    const Vector x = d.center + fraction * (d.radius / 1.25) * p;
    if (d.b(x) > 0) return x;
  }
}

Vector random_direction(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v.normalized();
}

void lightlike_batch(const ExperimentConfig& c, const RunOptions& opts, const std::filesystem::path& dir, ExperimentResult& res) {
  const Spec& s = c.manifold.spec;
  require_unit_lambda(s);
  const MPSystem sys = magnetic_system(s);
  const int dim = s.dim();
  std::mt19937_64 rng(c.seed);
  std::vector<std::pair<Vector, Vector>> starts;
  for (int i = 0; i < c.samples; ++i) {
    const Vector x = random_point(s.domain, rng);
    starts.emplace_back(x, random_direction(rng, dim));
  }
  struct Row {
    double duration = 0, residual = 0, drift = 0, roundtrip = 0;
    std::string status = "ok";
  };
  const auto rows = parallel_map<Row>(c.samples, opts.jobs, [&](int i) {
    Row r;
    try {
      const auto& [x, dir] = starts[static_cast<std::size_t>(i)];
      const auto st = null_normalize(s, null_state(s, x, dir));
      FlowOptions fo = flow_options(c);
      const auto traj = integrate_geodesic(s, st, fo);
      const auto p = null_project(s, traj);
      const auto up = lift(sys, p, st.t);
      r.duration = p.duration();
      const int samples = 200;
      for (int k = 0; k <= samples; ++k) {
        const double u = p.path.begin() + (p.path.end() - p.path.begin()) * k / samples;
        const auto rs = p.state(u);
        Vector f;
        detail::mp_rhs_packed(sys, p.path(u), f);
        r.residual = std::max(r.residual, (p.path.derivative(u) - f).cwiseAbs().maxCoeff());
        r.drift = std::max(r.drift, std::abs(std::sqrt(rs.vx.dot(s.h(rs.x) * rs.vx)) - 1.0));
        r.roundtrip = std::max(r.roundtrip, (up.path(u) - traj.path(u)).cwiseAbs().maxCoeff());
      }
    } catch (const Error& e) {
      r.status = e.what();
    }
    return r;
  });
  Csv csv(header({{"index"}, indexed("x", dim), indexed("direction", dim), {"duration", "equation_residual", "speed_drift", "lift_roundtrip", "status"}}));
  double residual = 0, drift = 0, roundtrip = 0;
  int failures = 0;
  for (int i = 0; i < c.samples; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    Csv::Row row;
    row << i << starts[static_cast<std::size_t>(i)].first << starts[static_cast<std::size_t>(i)].second << r.duration << r.residual
        << r.drift << r.roundtrip << r.status;
    csv.add(row);
    if (r.status != "ok") ++failures;
    residual = std::max(residual, r.residual);
    drift = std::max(drift, r.drift);
    roundtrip = std::max(roundtrip, r.roundtrip);
  }
  csv.write(dir / "null_geodesics.csv");
  res.files.push_back(res.name + "/null_geodesics.csv");
  res.assertions.push_back(at_most("failures", failures, 0));
  res.assertions.push_back(at_most("magnetic_equation_residual", residual, 1e-6));
  res.assertions.push_back(at_most("unit_speed_drift", drift, 1e-8));
  res.assertions.push_back(at_most("lift_roundtrip", roundtrip, 1e-6));

  const auto conv = null_convexity(s, c.sampling);
  if (conv.bridge.applicable) {
    res.assertions.push_back(at_most("null_bridge_sign_disagreements", conv.bridge.signs_agree ? 0 : 1, 0));
    res.assertions.push_back(at_most("null_bridge_difference", conv.bridge.max_abs_diff, 1e-8));
  } else {
    res.notes.push_back("null convexity bridge not applicable: max |<omega, v_x>| = " + fmt(conv.bridge.max_omega_tangent));
  }
  res.notes.push_back("max |d^s omega| = " + fmt(conv.max_symmetric_derivative));
}

void conservation_sweep(const ExperimentConfig& c, const RunOptions& opts, const std::filesystem::path& dir, ExperimentResult& res) {
  const Spec& s = c.manifold.spec;
  const int dim = s.dim();
  Csv csv(header({{"index", "rho"}, indexed("x", dim), indexed("vx", dim),
                  {"duration", "exit", "drift_J", "drift_H", "worst_relative", "retries", "energy_residual", "angle_deviation",
                   "lambda_slack", "status"}}));
  double worst = 0, energy = 0, angle = 0, slack = std::numeric_limits<double>::infinity();
  int failures = 0;
  for (double rho : c.rho) {
    const MPSystem sys = reduce(s, rho, c.m);
    std::mt19937_64 rng(c.seed);
    std::vector<SpacetimeState> states;
    for (int i = 0; i < c.samples; ++i) {
      const Vector x = random_point(s.domain, rng);
      const Vector dir = random_direction(rng, dim);
      const double lam = s.lambda(x);
      const double speed = std::sqrt(rho * rho / lam - c.m * c.m);
      const Vector vx = dir * (speed / std::sqrt(dir.dot(s.h(x) * dir)));
      states.push_back({0, x, -rho / lam + s.omega(x).dot(vx), vx, 0});
    }
    struct Row {
      std::optional<TrajectoryM> traj;
      double energy = 0, angle = 0, slack = std::numeric_limits<double>::infinity();
      std::string status = "ok";
    };
    const auto rows = parallel_map<Row>(c.samples, opts.jobs, [&](int i) {
      Row r;
      try {
        FlowOptions fo = flow_options(c);
        fo.horizon = c.horizon;
        r.traj = integrate_geodesic(s, states[static_cast<std::size_t>(i)], fo);
        for (double u : r.traj->path.knots()) {
          const auto st = r.traj->state(u);
          // identities use the conserved values the state actually carries;
          // their drift from the nominal (rho, m) is reported separately
          const auto G = assemble_g(s, st.x).g;
          const Vector v = st.velocity();
          const double rho_here = (G * v)(0);
          const double m_here = std::sqrt(-v.dot(G * v));
          r.energy = std::max(r.energy, mass_energy_check(reduce(s, rho_here, m_here), {st.x, st.vx}, m_here).residual);
          const double direct = std::acosh(std::abs(rho_here) / (m_here * std::sqrt(-G(0, 0))));
          r.angle = std::max(r.angle, std::abs(hyperbolic_angle(s, st.x, rho_here, m_here).phi - direct));
          r.slack = std::min(r.slack, rho * rho / (c.m * c.m) - s.lambda(st.x));
        }
      } catch (const Error& e) {
        r.status = e.what();
      }
      return r;
    });
    for (int i = 0; i < c.samples; ++i) {
      const auto& r = rows[static_cast<std::size_t>(i)];
      const auto& st = states[static_cast<std::size_t>(i)];
      Csv::Row row;
      row << i << rho << st.x << st.vx;
      if (r.traj) {
        const auto& log = r.traj->log;
        row << r.traj->duration() << std::string(r.traj->exit.reason == Termination::Boundary ? "boundary" : "horizon")
            << log.max_drift.at(0) << log.max_drift.at(1) << log.worst_relative() << log.retries << r.energy << r.angle << r.slack;
        worst = std::max(worst, log.worst_relative());
        energy = std::max(energy, r.energy);
        angle = std::max(angle, r.angle);
        slack = std::min(slack, r.slack);
      } else {
        ++failures;
        for (int k = 0; k < 2; ++k) row << std::numeric_limits<double>::quiet_NaN();
        row << std::string("-");
        for (int k = 0; k < 3; ++k) row << std::numeric_limits<double>::quiet_NaN();
        row << 0;
        for (int k = 0; k < 3; ++k) row << std::numeric_limits<double>::quiet_NaN();
      }
      row << r.status;
      csv.add(row);
    }
  }
  csv.write(dir / "conservation.csv");
  res.files.push_back(res.name + "/conservation.csv");
  res.assertions.push_back(at_most("failures", failures, 0));
  res.assertions.push_back(at_most("max_relative_drift", worst, 1e-8));
  res.assertions.push_back(at_most("mass_energy_residual", energy, 1e-9));
  res.assertions.push_back(at_most("hyperbolic_angle_identity", angle, 1e-9));
  res.assertions.push_back(at_least("lambda_bound_slack", slack, -1e-10));
}

json to_json(const ExperimentResult& r) {
  json a = json::array();
  for (const auto& x : r.assertions)
    a.push_back({{"name", x.name}, {"value", x.value}, {"relation", x.relation}, {"threshold", x.threshold}, {"status", x.pass ? "PASS" : "FAIL"}});
  return {{"name", r.name},       {"kind", std::string(to_string(r.kind))}, {"manifold", r.manifold},
          {"status", r.pass() ? "PASS" : "FAIL"}, {"error", r.error}, {"assertions", a}, {"files", r.files}, {"notes", r.notes}};
}

}  // namespace

std::string_view to_string(Kind kind) {
  for (const auto& [k, name] : kKinds)
    if (k == kind) return name;
  return "unknown";
}

std::optional<Kind> parse_kind(std::string_view text) {
  for (const auto& [k, name] : kKinds)
    if (name == text) return k;
  return std::nullopt;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": malformed JSON (" << e.what() << ")";
    throw Error(ErrorCode::ConfigError, msg.str());
  }
  RunConfig cfg;
  cfg.source = source;
  allow_keys(doc, source, {"experiments"});
  if (!doc.contains("experiments") || !doc["experiments"].is_array() || doc["experiments"].empty())
    config_error(source + ".experiments", "expected a non-empty array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc["experiments"].size(); ++i) {
    const std::string path = source + ".experiments[" + std::to_string(i) + "]";
    auto e = experiment(doc["experiments"][i], path, i);
    if (!names.insert(e.name).second) config_error(path + ".name", "duplicate experiment name '" + e.name + "'");
    cfg.experiments.push_back(std::move(e));
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::vector<std::string> validate_config(const RunConfig& config) {
  std::vector<std::string> issues;
  for (const auto& e : config.experiments) {
    try {
      ExperimentResult scratch;
      check_band(e, scratch);
      if (e.kind == Kind::LightlikeBatch) require_unit_lambda(e.manifold.spec);
      if (e.gauge) validate_gauge(boundary_fixing_gauge(e.manifold.spec.domain, *e.gauge), e.manifold.spec.domain);
    } catch (const Error& err) {
      issues.push_back("experiment '" + e.name + "': " + err.what());
    }
  }
  return issues;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("STATIONARY_OUTPUT_DIR"); env && *env) return env;
  return "stationary-out";
}

bool ExperimentResult::pass() const {
  return error.empty() && !assertions.empty() &&
         std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.pass; });
}

bool RunSummary::pass() const {
  return !experiments.empty() && std::all_of(experiments.begin(), experiments.end(), [](const auto& e) { return e.pass(); });
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentConfig c = config;
  if (options.seed) c.seed = *options.seed;
  if (options.abs_tol) c.tol.atol = *options.abs_tol;
  if (options.rel_tol) c.tol.rtol = *options.rel_tol;

  ExperimentResult res;
  res.name = c.name;
  res.kind = c.kind;
  res.manifold = c.manifold.label + (c.manifold.parameter ? "(" + brief(*c.manifold.parameter) + ")" : "");
  const auto dir = options.output_dir / c.name;
  try {
    std::filesystem::create_directories(dir);
    check_band(c, res);
    switch (c.kind) {
      case Kind::ScatterBatch: scatter_batch(c, options, dir, res); break;
      case Kind::EquivalenceCheck: equivalence_check(c, options, dir, res); break;
      case Kind::GaugeInvariance: gauge_invariance(c, options, dir, res); break;
      case Kind::SimplicityAudit: simplicity_audit(c, options, dir, res); break;
      case Kind::LightlikeBatch: lightlike_batch(c, options, dir, res); break;
      case Kind::ConservationSweep: conservation_sweep(c, options, dir, res); break;
    }
  } catch (const std::exception& e) {
    res.error = "experiment '" + c.name + "' (" + std::string(to_string(c.kind)) + " on " + res.manifold + "): " + e.what();
  }
  return res;
}

std::string summary_text(const RunSummary& summary) {
  std::ostringstream os;
  for (const auto& e : summary.experiments) {
    os << (e.pass() ? "PASS" : "FAIL") << " " << e.name << " [" << to_string(e.kind) << ", " << e.manifold << "]\n";
    for (const auto& a : e.assertions)
      os << "  " << (a.pass ? "PASS" : "FAIL") << " " << a.name << ": " << brief(a.value) << " " << a.relation << " " << brief(a.threshold) << "\n";
    for (const auto& n : e.notes) os << "  note: " << n << "\n";
    if (!e.error.empty()) os << "  error: " << e.error << "\n";
  }
  os << (summary.pass() ? "PASS" : "FAIL") << " overall\n";
  return os.str();
}

RunSummary run(const RunConfig& config, const RunOptions& options) {
  RunSummary summary;
  std::filesystem::create_directories(options.output_dir);
  for (const auto& e : config.experiments) summary.experiments.push_back(run_experiment(e, options));

  json doc = {{"status", summary.pass() ? "PASS" : "FAIL"}, {"config", config.source}, {"experiments", json::array()}};
  for (const auto& e : summary.experiments) doc["experiments"].push_back(to_json(e));
  std::ofstream(options.output_dir / "summary.json", std::ios::binary) << doc.dump(2) << "\n";
  std::ofstream(options.output_dir / "summary.txt", std::ios::binary) << summary_text(summary);
  return summary;
}

std::string gallery_listing() {
  std::ostringstream os;
  for (const auto& e : gallery_catalog()) {
    os << e.name;
    if (!e.parameter.empty()) os << "(" << e.parameter << " = " << brief(e.default_value) << ")";
    os << "\n    " << e.description << "\n";
    const auto band = admissible_band(gallery_spec(e.name), 1.0);
    os << "    lambda in [" << brief(band.lambda_min) << ", " << brief(band.lambda_max) << "], admissible rho for m = 1: " << band.band()
       << "\n";
  }
  return os.str();
}

}  // namespace stationary::runner
