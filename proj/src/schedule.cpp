#include "qhdyn/schedule.hpp"

#include <cmath>
#include <string>

#include "qhdyn/errors.hpp"

namespace qhdyn {

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kLinearRamp: return "linear-ramp";
    case ScheduleKind::kExponential: return "exponential";
    case ScheduleKind::kSinusoidal: return "sinusoidal";
  }
  return "unknown";
}

ScheduleKind schedule_kind_from_string(std::string_view name) {
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "linear-ramp") return ScheduleKind::kLinearRamp;
  if (name == "exponential") return ScheduleKind::kExponential;
  if (name == "sinusoidal") return ScheduleKind::kSinusoidal;
  throw ConfigError("unknown schedule kind '" + std::string(name) + "'");
}

Schedule Schedule::constant(Complex value) {
  Schedule s;
  s.kind = ScheduleKind::kConstant;
  s.base = value;
  return s;
}

Schedule Schedule::linear_ramp(Complex base, double rate) {
  Schedule s;
  s.kind = ScheduleKind::kLinearRamp;
  s.base = base;
  s.rate = rate;
  return s;
}

Schedule Schedule::exponential(Complex base, double rate) {
  Schedule s;
  s.kind = ScheduleKind::kExponential;
  s.base = base;
  s.rate = rate;
  return s;
}

Schedule Schedule::sinusoidal(Complex base, double amplitude, double frequency, double phase) {
  Schedule s;
  s.kind = ScheduleKind::kSinusoidal;
  s.base = base;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.phase = phase;
  return s;
}

bool Schedule::is_constant() const {
  switch (kind) {
    case ScheduleKind::kConstant: return true;
    case ScheduleKind::kLinearRamp: return rate == 0.0;
    case ScheduleKind::kExponential: return rate == 0.0 || base == Complex{};
    case ScheduleKind::kSinusoidal: return amplitude == 0.0 || frequency == 0.0 || base == Complex{};
  }
  return false;
}

Complex eval_schedule(const Schedule& s, double t) {
  switch (s.kind) {
    case ScheduleKind::kConstant: return s.base;
    case ScheduleKind::kLinearRamp: return s.base + s.rate * t;
    case ScheduleKind::kExponential: return s.base * std::exp(s.rate * t);
    case ScheduleKind::kSinusoidal: return s.base * (1.0 + s.amplitude * std::sin(s.frequency * t + s.phase));
  }
  return {};
}

Complex eval_schedule_derivative(const Schedule& s, double t) {
  switch (s.kind) {
    case ScheduleKind::kConstant: return {};
    case ScheduleKind::kLinearRamp: return {s.rate, 0.0};
    case ScheduleKind::kExponential: return s.base * s.rate * std::exp(s.rate * t);
    case ScheduleKind::kSinusoidal:
      return s.base * (s.amplitude * s.frequency * std::cos(s.frequency * t + s.phase));
  }
  return {};
}

bool may_vanish(const Schedule& s, double t0, double t1) {
  if (s.base == Complex{}) return true;
  switch (s.kind) {
    case ScheduleKind::kConstant:
    case ScheduleKind::kExponential: return false;
    case ScheduleKind::kLinearRamp: {
      // base + rate t = 0 needs a real base.
      if (s.rate == 0.0 || s.base.imag() != 0.0) return false;
      const double root = -s.base.real() / s.rate;
      return root >= t0 && root <= t1;
    }
    case ScheduleKind::kSinusoidal:
      return s.frequency != 0.0 ? std::abs(s.amplitude) >= 1.0
                                : std::abs(1.0 + s.amplitude * std::sin(s.phase)) == 0.0;
  }
  return true;
}

void validate_nonvanishing(const Schedule& s, double t0, double t1, std::string_view what) {
  const std::string name(what);
  if (!std::isfinite(s.base.real()) || !std::isfinite(s.base.imag()) || !std::isfinite(s.rate) ||
      !std::isfinite(s.amplitude) || !std::isfinite(s.frequency) || !std::isfinite(s.phase)) {
    throw ConfigError(name + ": schedule coefficients must be finite");
  }
  for (double t : {t0, t1}) {
    const Complex v = eval_schedule(s, t);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ConfigError(name + ": schedule is not finite on the run interval");
    }
  }
  if (may_vanish(s, t0, t1)) {
    throw ConfigError(name + ": schedule can vanish on [" + std::to_string(t0) + ", " + std::to_string(t1) +
                      "] (dressing coefficients must stay nonzero)");
  }
}

}  // namespace qhdyn
