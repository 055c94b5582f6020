#include "uwoc/sim.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace uwoc::sim {

namespace {

// Times are k * dt; comparisons against configured instants allow for the
// representation error of that product.
constexpr double kTimeEps = 1e-9;

std::string format_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "t=%.6g s", t);
  return buf;
}

double component_error(const RunRow& row, Component c) {
  switch (c) {
    case Component::kX:
      return row.eta_ref[0] - row.state.eta[0];
    case Component::kY:
      return row.eta_ref[1] - row.state.eta[1];
    case Component::kRho:
      return vehicle::wrap_angle(row.eta_ref[2] - row.state.eta[2]);
  }
  return 0.0;
}

// Earliest index i such that rows[i, end) are all inside; `end` if none.
std::size_t stay_index(std::span<const RunRow> rows, std::size_t end) {
  std::size_t i = end;
  while (i > 0 && rows[i - 1].inside_cone) --i;
  return i;
}

}  // namespace

DivergenceError::DivergenceError(double t, const std::string& what)
    : std::runtime_error(format_time(t) + ": " + what), time_(t) {}

std::string to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::kPd:
      return "pd";
    case ControllerKind::kNlpd:
      return "nlpd";
    case ControllerKind::kNone:
      return "none";
  }
  return "pd";
}

ControllerKind controller_kind_from_string(const std::string& name) {
  if (name == "pd") return ControllerKind::kPd;
  if (name == "nlpd") return ControllerKind::kNlpd;
  if (name == "none") return ControllerKind::kNone;
  throw std::invalid_argument("unknown controller type '" + name + "'");
}

control::GainSchedule ControllerConfig::schedule() const {
  if (kind == ControllerKind::kNlpd) return nlpd;
  return control::GainSchedule::constant(kp, kv);
}

std::int64_t Scenario::step_count() const {
  return std::llround(duration / dt);
}

void validate(const Scenario& s) {
  auto req = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
  };
  req(std::isfinite(s.duration) && s.duration > 0, "duration > 0");
  req(std::isfinite(s.dt) && s.dt > 0, "dt > 0");
  req(std::abs(static_cast<double>(s.step_count()) * s.dt - s.duration) <=
          1e-9 * s.duration,
      "duration / dt is a whole number of steps");
  req(s.step_count() >= 1, "duration >= dt");
  req(std::isfinite(s.depth) && s.depth > 0, "depth > 0");
  req(s.initial_eta.allFinite(), "initial_eta finite");
  req(s.mass_scale > 0, "mass_scale > 0");
  vehicle::validate(s.vehicle);
  if (s.controller.kind != ControllerKind::kNone) {
    req(s.controller.kp > 0 && s.controller.kv > 0, "kp > 0 and kv > 0");
  }
  control::validate(s.controller.nlpd);
  if (s.disturbance) {
    req(s.disturbance->duration >= 0, "disturbance.duration >= 0");
    req(s.disturbance->wrench.tau.allFinite(), "disturbance.wrench finite");
  }
  if (s.noise) {
    req(s.noise->sigma_pos >= 0 && s.noise->sigma_yaw >= 0 &&
            s.noise->sigma_vel >= 0,
        "noise sigmas >= 0");
  }
  if (s.rmse_window) {
    req(s.rmse_window->first <= s.rmse_window->second,
        "rmse_window start <= end");
  }
}

vehicle::Wrench disturbance_wrench(double t,
                                   const std::optional<DisturbanceSpec>& spec) {
  if (!spec) return {};
  const double end = spec->start + spec->duration;
  if (t >= spec->start - kTimeEps && t < end - kTimeEps) return spec->wrench;
  return {};
}

Perturbation measurement_noise(Xoshiro256& rng, const NoiseSpec& spec) {
  Perturbation p;
  p.eta[0] = spec.sigma_pos * rng.normal();
  p.eta[1] = spec.sigma_pos * rng.normal();
  p.eta[2] = spec.sigma_yaw * rng.normal();
  for (int i = 0; i < 3; ++i) p.nu[i] = spec.sigma_vel * rng.normal();
  return p;
}

RunRecord run(const Scenario& scenario, const CommTarget& target) {
  validate(scenario);
  optics::validate(target.link.tx);
  optics::validate(target.link.rx);
  optics::validate(target.link.water);

  RunRecord record;
  const cone::ConeRegion cone =
      cone::make_cone(target.link, target.target_ber, target.min_bit_rate);
  record.slant_height = cone.slant_height();

  vehicle::AuvParams plant = scenario.vehicle;
  plant.mass_scale = scenario.vehicle.mass_scale * scenario.mass_scale;
  const vehicle::AuvParams& model = scenario.vehicle;
  const control::GainSchedule schedule = scenario.controller.schedule();

  std::optional<Xoshiro256> rng;
  if (scenario.noise) rng.emplace(scenario.noise->seed);

  const std::int64_t steps = scenario.step_count();
  record.rows.reserve(static_cast<std::size_t>(steps) + 1);

  vehicle::AuvState state{scenario.initial_eta, Vec3::Zero()};
  for (std::int64_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    const control::ReferenceState ref = scenario.ship.at(t);

    vehicle::AuvState measured = state;
    if (rng) {
      const Perturbation p = measurement_noise(*rng, *scenario.noise);
      measured.eta += p.eta;
      measured.nu += p.nu;
    }

    vehicle::Wrench tau;
    switch (scenario.controller.kind) {
      case ControllerKind::kPd:
      case ControllerKind::kNlpd:
        tau = control::nlpd_tau(measured, ref, model, schedule);
        break;
      case ControllerKind::kNone:
        break;
    }

    RunRow row;
    row.t = t;
    row.state = state;
    row.eta_ref = ref.eta;
    row.tau = tau;
    const Vec3 apex(ref.eta[0], ref.eta[1], 0.0);
    const Vec3 point(state.eta[0], state.eta[1], scenario.depth);
    const cone::Containment c = cone.translated_to(apex).contains(point);
    row.distance = c.distance;
    row.incidence_angle = c.incidence_angle;
    row.inside_cone = c.inside;
    row.bit_rate = optics::bit_rate(
        target.link, {c.distance, c.incidence_angle, scenario.depth},
        target.target_ber);
    row.lyapunov = control::lyapunov_value(control::tracking_error(state, ref),
                                           state, plant, schedule);
    record.rows.push_back(row);

    if (k == steps) break;
    try {
      state = vehicle::step(state, plant, tau,
                            disturbance_wrench(t, scenario.disturbance),
                            scenario.dt);
    } catch (const vehicle::DivergenceError& e) {
      throw DivergenceError(t + scenario.dt, e.what());
    }
  }

  record.metrics = compute_metrics(record.rows, scenario);
  return record;
}

std::optional<double> cone_arrival_time(std::span<const RunRow> rows) {
  for (const RunRow& row : rows) {
    if (row.inside_cone) return row.t;
  }
  return std::nullopt;
}

std::optional<double> communication_established_time(
    std::span<const RunRow> rows, std::optional<double> disturbance_start) {
  if (rows.empty()) return std::nullopt;
  const std::size_t global = stay_index(rows, rows.size());
  if (disturbance_start) {
    std::size_t cutoff = 0;
    while (cutoff < rows.size() &&
           rows[cutoff].t < *disturbance_start - kTimeEps) {
      ++cutoff;
    }
    if (cutoff > 0 && rows[cutoff - 1].inside_cone) {
      return rows[stay_index(rows, cutoff)].t;
    }
  }
  if (global == rows.size()) return std::nullopt;
  return rows[global].t;
}

std::optional<double> restoring_time(std::span<const RunRow> rows,
                                     double disturbance_start) {
  std::optional<std::size_t> exit;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].t < disturbance_start - kTimeEps) continue;
    if (rows[i - 1].inside_cone && !rows[i].inside_cone) {
      exit = i;
      break;
    }
  }
  if (!exit) return std::nullopt;
  const std::size_t back = stay_index(rows, rows.size());
  if (back == rows.size()) return std::numeric_limits<double>::infinity();
  return rows[back].t - rows[*exit].t;
}

double rmse(std::span<const RunRow> rows, Component component,
            std::pair<double, double> window) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const RunRow& row : rows) {
    if (row.t < window.first - kTimeEps || row.t > window.second + kTimeEps) {
      continue;
    }
    const double e = component_error(row, component);
    sum += e * e;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("rmse: empty window");
  return std::sqrt(sum / static_cast<double>(n));
}

RunMetrics compute_metrics(std::span<const RunRow> rows,
                           const Scenario& scenario) {
  RunMetrics m;
  std::optional<double> onset;
  if (scenario.disturbance) onset = scenario.disturbance->start;
  m.arrival_time = cone_arrival_time(rows);
  m.established_time = communication_established_time(rows, onset);
  if (onset) m.restoring_time = restoring_time(rows, *onset);

  if (scenario.rmse_window) {
    m.rmse_window = scenario.rmse_window;
  } else if (m.established_time && !rows.empty()) {
    m.rmse_window = std::make_pair(*m.established_time, rows.back().t);
  }
  if (m.rmse_window) {
    m.rmse_x = rmse(rows, Component::kX, *m.rmse_window);
    m.rmse_y = rmse(rows, Component::kY, *m.rmse_window);
    m.rmse_rho = rmse(rows, Component::kRho, *m.rmse_window);
  }
  return m;
}

double max_distance(std::span<const RunRow> rows, double t_from) {
  double out = 0.0;
  for (const RunRow& row : rows) {
    if (row.t >= t_from - kTimeEps) out = std::max(out, row.distance);
  }
  return out;
}

}  // namespace uwoc::sim
