#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "asrmeso/config.hpp"
#include "asrmeso/gel.hpp"
#include "asrmeso/mazars.hpp"
#include "asrmeso/meshgen.hpp"
#include "asrmeso/observables.hpp"
#include "asrmeso/viscoelastic.hpp"

namespace asrmeso {

// Explicit central-difference dynamics on the tetrahedral mesh, run in a
// quasi-static regime (mass scaling plus mass-proportional damping). The
// simulated clock covers T_sim seconds; every step also advances the
// physical clock by dt * T_real / T_sim days, which is the time scale the
// creep and gel laws live on.

struct TimeMap {
    double t_real;   // days at the end of step n (0-based)
    double dt_real;  // days per step
};

inline TimeMap map_time(long n, double dt, double T_sim, double T_real) {
    const double dt_real = dt * T_real / T_sim;
    return {(n + 1) * dt_real, dt_real};
}

// Dilatational wave speed sqrt(E (1-nu) / ((1+nu)(1-2nu) rho)), m/s.
double dilatational_speed(double E, double nu, double rho);

// Scalar nodal masses, kg: each element sends rho_phase * V / 4 to its four
// corners, times the mass scaling factor.
std::vector<double> lumped_mass(const Mesh& mesh, const std::array<double, 3>& density,
                                double mass_scaling);

// CFL step estimate: safety * h_min / c, with c the fastest dilatational
// speed among phases present in the mesh and h_min the smallest cell edge.
// Mass scaling stretches it by sqrt(mass_scaling).
double stable_dt(const Mesh& mesh, const SimulationConfig& cfg);

class ExplicitSolver {
  public:
    // The mesh is referenced, not copied; it must outlive the solver.
    ExplicitSolver(const Mesh& mesh, const SimulationConfig& cfg);

    double dt() const { return dt_; }
    long n_steps() const { return n_steps_; }
    double dt_real() const { return dt_real_; }
    double t_real() const { return t_real_; }
    double wave_speed() const { return wave_speed_; }
    double damping() const { return damping_; }

    // Scale factor applied to the assembled traction loads (preload ramp).
    void set_traction_scale(double s) { traction_scale_ = s; }

    // One step with the physical clock frozen: creep uses the instantaneous
    // limit, gel kinetics do not advance. Used to apply loads statically.
    void step_pseudo();

    // One step of the timed phase; advances t_real by dt_real.
    void step_timed();

    // Traction ramp over preload_fraction * T_sim followed by damped
    // relaxation until the kinetic energy falls below 1e-10 of its ramp
    // peak. No-op when the configuration disables preload.
    struct PreloadResult {
        long steps = 0;
        double residual_ke = 0.0;
    };
    PreloadResult run_preload();

    // Diagnostics. All reductions run serially in fixed order, so recorded
    // observables are bit-reproducible for a fixed thread count.
    double kinetic_energy() const;        // 1/2 sum m v^2, current half-step v
    double kinetic_energy_cross() const;  // 1/2 sum m v_prev . v; paired with
                                          // strain_energy at the pre-step u it
                                          // is the conserved discrete energy
    double strain_energy() const;         // exact for elastic configurations
    Vec3 edge_strains() const;
    double damaged_fraction(Phase p) const;
    double mean_eps_gel() const;  // 0 when the mesh has no gel elements
    ObservableRow observe() const;

    const std::vector<double>& displacement() const { return u_; }
    const std::vector<double>& damage() const { return dmg_; }
    const std::vector<double>& internal_force() const { return f_int_; }

    // Test hooks for the force/energy consistency checks. Meaningful only
    // for stateless element paths (creep and damage disabled): with state
    // active the assembly would advance it.
    void set_displacement(const std::vector<double>& u);
    void recompute_internal_force();

  private:
    void assemble(const ViscoStep& vs, bool timed, double dt_real_days);
    void update_nodes(double dt);
    void check_health(long step_label);

    const Mesh& mesh_;
    SimulationConfig cfg_;

    double dt_ = 0.0, dt_real_ = 0.0, t_real_ = 0.0;
    long n_steps_ = 0, timed_steps_ = 0, total_steps_ = 0;
    double wave_speed_ = 0.0, damping_ = 0.0, traction_scale_ = 1.0;

    // Geometry: six shape-gradient tables (1/m), one per tetrahedron slot
    // in the cell; element e uses table e % 6. Volumes in m^3.
    std::array<std::array<double, 12>, 6> grad_;
    std::vector<double> vol_;

    std::vector<double> mass_;             // per node, kg
    std::vector<double> u_, v_, v_prev_;   // 3 per node, m and m/s
    std::vector<double> f_int_, f_ext_;    // 3 per node, N
    std::vector<double> f_elem_;           // 12 per element, N
    std::vector<std::uint32_t> gather_offsets_, gather_items_;
    std::vector<std::uint32_t> fixed_dofs_;

    // Per-element damage state (unused slots stay zero for gel).
    std::vector<double> kappa_, dmg_;

    // Creep state exists only for paste elements, indexed compactly.
    std::vector<std::int32_t> paste_slot_;  // element -> slot or -1
    std::vector<double> sigma_eff_, eps_prev_, eps_cr_;  // 6 per slot
    std::vector<Voigt> sig_mu_;                          // n_units per slot
    std::size_t n_units_ = 0;

    std::size_t n_paste_ = 0, n_agg_ = 0, n_gel_ = 0;
    GelState gel_state_;
};

struct RunResult {
    TimeSeries series;
    double dt = 0.0;
    double dt_real = 0.0;
    long steps = 0;
    long preload_steps = 0;
    double preload_residual_ke = 0.0;
};

// Full scenario: optional preload, then the timed phase. Records the post-
// preload state as the t = 0 row plus about cfg.output.samples rows and,
// when requested, VTK snapshots into cfg.output.dir. The progress callback,
// when set, sees every recorded row.
RunResult run_scenario(const Mesh& mesh, const SimulationConfig& cfg,
                       const std::function<void(const ObservableRow&)>& progress = {});

}
