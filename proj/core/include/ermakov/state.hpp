#pragma once

namespace ermakov {

/// |q|, |f|, |x|, |rho|, |Q| below this abort integration.
inline constexpr double singularity_guard = 1e-10;

/// Physical-frame state. tau is the reparametrized time, dt = m f^2 dtau.
struct PhysState {
    double t = 0.0;
    double tau = 0.0;
    double q = 0.0;
    double q_dot = 0.0;
    double f = 0.0;
    double f_dot = 0.0;
};

/// Autonomous frame: Q = q/f, Q' = dQ/dtau.
struct QFrameState {
    double tau = 0.0;
    double Q = 0.0;
    double Q_prime = 0.0;
};

/// Rescaled pair x = q sqrt(m), rho = f sqrt(m).
struct XRhoState {
    double x = 0.0;
    double x_dot = 0.0;
    double rho = 0.0;
    double rho_dot = 0.0;
};

} // namespace ermakov
