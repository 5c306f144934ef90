#pragma once

#include <string_view>

#include "qhdyn/types.hpp"

namespace qhdyn {

enum class ScheduleKind { kConstant, kLinearRamp, kExponential, kSinusoidal };

std::string_view to_string(ScheduleKind kind);
ScheduleKind schedule_kind_from_string(std::string_view name);

/// Closed-form time dependence of a scalar.
///
///   constant     base
///   linear-ramp  base + rate * t
///   exponential  base * exp(rate * t)
///   sinusoidal   base * (1 + amplitude * sin(frequency * t + phase))
///
/// `base` may be complex (dressing coefficients live in C \ {0}); the remaining
/// coefficients are real.
struct Schedule {
  ScheduleKind kind = ScheduleKind::kConstant;
  Complex base{1.0, 0.0};
  double rate = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
  bool differentiable = true;

  static Schedule constant(Complex value);
  static Schedule linear_ramp(Complex base, double rate);
  static Schedule exponential(Complex base, double rate);
  static Schedule sinusoidal(Complex base, double amplitude, double frequency, double phase = 0.0);

  bool is_constant() const;
};

Complex eval_schedule(const Schedule& s, double t);

/// Analytic d/dt of eval_schedule.
Complex eval_schedule_derivative(const Schedule& s, double t);

/// True when the schedule can take the value zero somewhere in [t0, t1].
/// Sinusoidal schedules are judged over a full period (|amplitude| >= 1 may vanish).
bool may_vanish(const Schedule& s, double t0, double t1);

/// Throws ConfigError naming `what` if the schedule may vanish on [t0, t1] or is not finite there.
void validate_nonvanishing(const Schedule& s, double t0, double t1, std::string_view what);

}  // namespace qhdyn
