#include "asrmeso/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "asrmeso/errors.hpp"

namespace asrmeso {

namespace {

constexpr double kMm = 1e-3;        // mm -> m
constexpr double kMm3 = 1e-9;       // mm^3 -> m^3
constexpr double kDamageCap = 1.0 - 1e-6;  // residual stiffness floor

// Gradients of the four linear shape functions of a tet, corners in metres.
// Rows of the inverse edge matrix give nodes 1..3; node 0 balances them.
std::array<double, 12> tet_gradients(const std::array<Vec3, 4>& p) {
    const double a11 = p[1].x - p[0].x, a12 = p[2].x - p[0].x, a13 = p[3].x - p[0].x;
    const double a21 = p[1].y - p[0].y, a22 = p[2].y - p[0].y, a23 = p[3].y - p[0].y;
    const double a31 = p[1].z - p[0].z, a32 = p[2].z - p[0].z, a33 = p[3].z - p[0].z;
    const double det = a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
                       a13 * (a21 * a32 - a22 * a31);
    if (!(std::abs(det) > 0.0)) throw NumericalError("degenerate tetrahedron");
    const double id = 1.0 / det;
    // inv(A) rows: gradient of the barycentric coordinate of node 1..3.
    const double g1x = (a22 * a33 - a23 * a32) * id;
    const double g1y = (a13 * a32 - a12 * a33) * id;
    const double g1z = (a12 * a23 - a13 * a22) * id;
    const double g2x = (a23 * a31 - a21 * a33) * id;
    const double g2y = (a11 * a33 - a13 * a31) * id;
    const double g2z = (a13 * a21 - a11 * a23) * id;
    const double g3x = (a21 * a32 - a22 * a31) * id;
    const double g3y = (a12 * a31 - a11 * a32) * id;
    const double g3z = (a11 * a22 - a12 * a21) * id;
    return {-(g1x + g2x + g3x), -(g1y + g2y + g3y), -(g1z + g2z + g3z),
            g1x, g1y, g1z, g2x, g2y, g2z, g3x, g3y, g3z};
}

double plane_coordinate(const Vec3& box, int axis, int side) {
    const double extent = axis == 0 ? box.x : axis == 1 ? box.y : box.z;
    return side == 0 ? 0.0 : extent;
}

double coord(const Vec3& p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

}  // namespace

double dilatational_speed(double E, double nu, double rho) {
    return std::sqrt(E * (1.0 - nu) / ((1.0 + nu) * (1.0 - 2.0 * nu) * rho));
}

std::vector<double> lumped_mass(const Mesh& mesh, const std::array<double, 3>& density,
                                double mass_scaling) {
    std::vector<double> m(mesh.nodes.size(), 0.0);
    for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
        const double share =
            density[static_cast<int>(mesh.phase[e])] * mesh.volume[e] * kMm3 * mass_scaling / 4.0;
        for (int a = 0; a < 4; ++a) m[mesh.tets[e][a]] += share;
    }
    return m;
}

double stable_dt(const Mesh& mesh, const SimulationConfig& cfg) {
    bool present[3] = {false, false, false};
    for (Phase p : mesh.phase) present[static_cast<int>(p)] = true;
    double c = 0.0;
    if (present[0]) {
        c = std::max(c, dilatational_speed(cfg.paste.chain.E0, cfg.paste.nu,
                                           cfg.solver.density[0]));
    }
    if (present[1]) {
        c = std::max(c, dilatational_speed(cfg.aggregate.elastic.E, cfg.aggregate.elastic.nu,
                                           cfg.solver.density[1]));
    }
    if (present[2]) {
        c = std::max(c, dilatational_speed(cfg.gel.elastic.E, cfg.gel.elastic.nu,
                                           cfg.solver.density[2]));
    }
    const double h_min = std::min({mesh.hx, mesh.hy, mesh.hz}) * kMm;
    return cfg.solver.safety * h_min / c * std::sqrt(cfg.solver.mass_scaling);
}

ExplicitSolver::ExplicitSolver(const Mesh& mesh, const SimulationConfig& cfg)
    : mesh_(mesh), cfg_(cfg) {
    const std::size_t n_nodes = mesh.nodes.size();
    const std::size_t n_elem = mesh.n_elements();
    if (n_elem == 0 || n_elem % 6 != 0) {
        throw NumericalError("solver expects the six-per-cell grid mesh");
    }

    // Step size: shrink the requested or CFL step so it divides T_sim.
    const double dt_raw = cfg.solver.dt > 0.0 ? cfg.solver.dt : stable_dt(mesh, cfg);
    n_steps_ = std::max<long>(1, static_cast<long>(std::ceil(cfg.solver.T_sim / dt_raw - 1e-12)));
    dt_ = cfg.solver.T_sim / n_steps_;
    dt_real_ = map_time(0, dt_, cfg.solver.T_sim, cfg.solver.T_real).dt_real;

    bool present[3] = {false, false, false};
    for (Phase p : mesh.phase) present[static_cast<int>(p)] = true;
    double c = 0.0;
    if (present[0])
        c = std::max(c, dilatational_speed(cfg.paste.chain.E0, cfg.paste.nu, cfg.solver.density[0]));
    if (present[1])
        c = std::max(c, dilatational_speed(cfg.aggregate.elastic.E, cfg.aggregate.elastic.nu,
                                           cfg.solver.density[1]));
    if (present[2])
        c = std::max(c, dilatational_speed(cfg.gel.elastic.E, cfg.gel.elastic.nu,
                                           cfg.solver.density[2]));
    wave_speed_ = c;

    // Near-critical damping of the lowest axial mode, estimated from the
    // longest specimen dimension and the mass-scaled wave speed. Damping on
    // the old velocity shrinks the stable step (omega*dt <= 2*sqrt(1 - c*dt/2)),
    // so the automatic value is capped well below 2/dt; small specimens would
    // otherwise destabilize the highest mesh modes.
    const double L_max = std::max({mesh.box.x, mesh.box.y, mesh.box.z}) * kMm;
    const double c_eff = c / std::sqrt(cfg.solver.mass_scaling);
    damping_ = cfg.solver.damping >= 0.0 ? cfg.solver.damping
                                         : std::min(2.0 * M_PI * c_eff / L_max, 0.2 / dt_);

    grad_.fill({});
    for (int t = 0; t < 6; ++t) {
        std::array<Vec3, 4> p;
        for (int a = 0; a < 4; ++a) {
            const Vec3& q = mesh.nodes[mesh.tets[t][a]];
            p[a] = {q.x * kMm, q.y * kMm, q.z * kMm};
        }
        grad_[t] = tet_gradients(p);
    }

    vol_.resize(n_elem);
    for (std::size_t e = 0; e < n_elem; ++e) vol_[e] = mesh.volume[e] * kMm3;

    mass_ = lumped_mass(mesh, cfg.solver.density, cfg.solver.mass_scaling);
    for (double m : mass_) {
        if (!(m > 0.0)) throw NumericalError("zero lumped mass; mesh node without elements");
    }

    u_.assign(3 * n_nodes, 0.0);
    v_.assign(3 * n_nodes, 0.0);
    v_prev_.assign(3 * n_nodes, 0.0);
    f_int_.assign(3 * n_nodes, 0.0);
    f_ext_.assign(3 * n_nodes, 0.0);
    f_elem_.assign(12 * n_elem, 0.0);

    // Node -> (element, corner) adjacency for the deterministic gather.
    gather_offsets_.assign(n_nodes + 1, 0);
    for (std::size_t e = 0; e < n_elem; ++e)
        for (int a = 0; a < 4; ++a) ++gather_offsets_[mesh.tets[e][a] + 1];
    for (std::size_t n = 0; n < n_nodes; ++n) gather_offsets_[n + 1] += gather_offsets_[n];
    gather_items_.resize(4 * n_elem);
    {
        std::vector<std::uint32_t> cursor(gather_offsets_.begin(), gather_offsets_.end() - 1);
        for (std::size_t e = 0; e < n_elem; ++e)
            for (int a = 0; a < 4; ++a) {
                const int node = mesh.tets[e][a];
                gather_items_[cursor[node]++] = static_cast<std::uint32_t>(12 * e + 3 * a);
            }
    }

    kappa_.assign(n_elem, 0.0);
    dmg_.assign(n_elem, 0.0);

    paste_slot_.assign(n_elem, -1);
    for (std::size_t e = 0; e < n_elem; ++e) {
        switch (mesh.phase[e]) {
            case Phase::Paste: paste_slot_[e] = static_cast<std::int32_t>(n_paste_++); break;
            case Phase::Aggregate: ++n_agg_; break;
            case Phase::Gel: ++n_gel_; break;
        }
    }
    n_units_ = cfg.paste.chain.E_inf.size();
    if (cfg.paste.creep && n_paste_ > 0) {
        sigma_eff_.assign(6 * n_paste_, 0.0);
        eps_prev_.assign(6 * n_paste_, 0.0);
        eps_cr_.assign(6 * n_paste_, 0.0);
        sig_mu_.assign(n_units_ * n_paste_, Voigt{});
    }

    // Fixed displacement components: explicit plane selections plus the
    // optional minimal rigid-body restraint (3-2-1 corner pins).
    std::vector<std::uint8_t> fixed(3 * n_nodes, 0);
    const double tol = 1e-6 * std::min({mesh.hx, mesh.hy, mesh.hz});
    for (const BcFix& f : cfg.bc.fixes) {
        const double plane = plane_coordinate(mesh.box, f.plane_axis, f.plane_side);
        std::size_t hits = 0;
        for (std::size_t n = 0; n < n_nodes; ++n) {
            if (std::abs(coord(mesh.nodes[n], f.plane_axis) - plane) < tol) {
                fixed[3 * n + f.component] = 1;
                ++hits;
            }
        }
        if (hits == 0) throw ConfigError("fix selects no nodes");
    }
    if (cfg.bc.restraint == Restraint::minimal) {
        const int a = mesh.node_id(0, 0, 0);
        const int b = mesh.node_id(mesh.nx, 0, 0);
        const int d = mesh.node_id(0, mesh.ny, 0);
        fixed[3 * a + 0] = fixed[3 * a + 1] = fixed[3 * a + 2] = 1;
        fixed[3 * b + 1] = fixed[3 * b + 2] = 1;
        fixed[3 * d + 2] = 1;
    }
    for (std::size_t d = 0; d < fixed.size(); ++d)
        if (fixed[d]) fixed_dofs_.push_back(static_cast<std::uint32_t>(d));

    // Surface tractions -> consistent nodal loads: collect the boundary
    // triangles lying in the selected plane and spread value * area / 3 to
    // each corner. Faces interior to the mesh can never lie in a boundary
    // plane, so scanning all four faces of every element finds each surface
    // triangle exactly once.
    for (const BcTraction& t : cfg.bc.tractions) {
        const double plane = plane_coordinate(mesh.box, t.plane_axis, t.plane_side);
        double area = 0.0;  // m^2
        static constexpr int kFaces[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
        for (std::size_t e = 0; e < n_elem; ++e) {
            for (const auto& face : kFaces) {
                const int i0 = mesh.tets[e][face[0]];
                const int i1 = mesh.tets[e][face[1]];
                const int i2 = mesh.tets[e][face[2]];
                if (std::abs(coord(mesh.nodes[i0], t.plane_axis) - plane) >= tol ||
                    std::abs(coord(mesh.nodes[i1], t.plane_axis) - plane) >= tol ||
                    std::abs(coord(mesh.nodes[i2], t.plane_axis) - plane) >= tol)
                    continue;
                const Vec3& p0 = mesh.nodes[i0];
                const Vec3& p1 = mesh.nodes[i1];
                const Vec3& p2 = mesh.nodes[i2];
                const double ux = p1.x - p0.x, uy = p1.y - p0.y, uz = p1.z - p0.z;
                const double wx = p2.x - p0.x, wy = p2.y - p0.y, wz = p2.z - p0.z;
                const double cx = uy * wz - uz * wy;
                const double cy = uz * wx - ux * wz;
                const double cz = ux * wy - uy * wx;
                const double tri = 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz) * kMm * kMm;
                area += tri;
                const double load = t.value * tri / 3.0;
                f_ext_[3 * i0 + t.component] += load;
                f_ext_[3 * i1 + t.component] += load;
                f_ext_[3 * i2 + t.component] += load;
            }
        }
        const double expect =
            (t.plane_axis == 0 ? mesh.box.y * mesh.box.z
             : t.plane_axis == 1 ? mesh.box.x * mesh.box.z
                                 : mesh.box.x * mesh.box.y) * kMm * kMm;
        if (std::abs(area - expect) > 1e-9 * expect) {
            throw NumericalError("traction face triangulation does not tile the face");
        }
    }
}

void ExplicitSolver::update_nodes(double dt) {
    const std::size_t n_dof = u_.size();
    const double c = damping_;
    std::swap(v_prev_, v_);
    const double* vp = v_prev_.data();
    double* v = v_.data();
    double* u = u_.data();
    const double* fi = f_int_.data();
    const double* fe = f_ext_.data();
    const double scale = traction_scale_;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(n_dof); ++d) {
        const double m = mass_[static_cast<std::size_t>(d) / 3];
        const double a = (fe[d] * scale - fi[d] - c * m * vp[d]) / m;
        v[d] = vp[d] + a * dt;
    }
    for (std::uint32_t d : fixed_dofs_) v[d] = 0.0;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(n_dof); ++d) u[d] += v[d] * dt;
}

void ExplicitSolver::assemble(const ViscoStep& vs, bool timed, double dt_real_days) {
    // Shared gel kinetics: stress-independent and spatially uniform, so one
    // state serves every gel element.
    if (timed && n_gel_ > 0) {
        gel_strain_step(cfg_.kinetics, gel_state_, cfg_.temperature_kelvin(t_real_), dt_real_days);
    }

    const std::size_t n_elem = mesh_.n_elements();
    const auto& tets = mesh_.tets;
    const double* u = u_.data();
    const PasteConfig& paste = cfg_.paste;
    const AggregateConfig& agg = cfg_.aggregate;
    const ElasticParams& gel = cfg_.gel.elastic;
    const double eps_gel_now = gel_state_.eps_gel;

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t es = 0; es < static_cast<std::ptrdiff_t>(n_elem); ++es) {
        const std::size_t e = static_cast<std::size_t>(es);
        const auto& g = grad_[e % 6];
        const auto& ids = tets[e];

        Voigt eps{};
        for (int a = 0; a < 4; ++a) {
            const double gx = g[3 * a], gy = g[3 * a + 1], gz = g[3 * a + 2];
            const double ux = u[3 * ids[a]], uy = u[3 * ids[a] + 1], uz = u[3 * ids[a] + 2];
            eps[0] += gx * ux;
            eps[1] += gy * uy;
            eps[2] += gz * uz;
            eps[3] += gy * uz + gz * uy;
            eps[4] += gx * uz + gz * ux;
            eps[5] += gx * uy + gy * ux;
        }

        Voigt sig{};
        switch (mesh_.phase[e]) {
            case Phase::Paste: {
                Voigt eps_el = eps;
                Voigt sig_bar;
                if (paste.creep) {
                    const std::size_t s = static_cast<std::size_t>(paste_slot_[e]);
                    double* se = sigma_eff_.data() + 6 * s;
                    double* ep = eps_prev_.data() + 6 * s;
                    double* ec = eps_cr_.data() + 6 * s;
                    Voigt* smu = sig_mu_.data() + n_units_ * s;
                    const Voigt dcr = creep_increment(paste.chain, vs, smu, paste.nu);
                    Voigt dmech;
                    for (int i = 0; i < 6; ++i) dmech[i] = eps[i] - ep[i] - dcr[i];
                    Voigt dsig = unit_stiffness_apply(paste.nu, dmech);
                    for (int i = 0; i < 6; ++i) dsig[i] *= vs.E_n;
                    update_unit_stresses(paste.chain, vs, smu, dsig);
                    for (int i = 0; i < 6; ++i) {
                        se[i] += dsig[i];
                        ep[i] = eps[i];
                        ec[i] += dcr[i];
                        eps_el[i] = eps[i] - ec[i];
                        sig_bar[i] = se[i];
                    }
                } else {
                    sig_bar = unit_stiffness_apply(paste.nu, eps);
                    for (int i = 0; i < 6; ++i) sig_bar[i] *= paste.chain.E0;
                }
                double D = dmg_[e];
                if (paste.damage_on) {
                    MazarsState st{kappa_[e], dmg_[e]};
                    D = mazars_update(paste.damage, st, eps_el, paste.chain.E0, paste.nu).D;
                    kappa_[e] = st.kappa;
                    dmg_[e] = st.D;
                }
                const double keep = 1.0 - std::min(D, kDamageCap);
                for (int i = 0; i < 6; ++i) sig[i] = keep * sig_bar[i];
                break;
            }
            case Phase::Aggregate: {
                Voigt sig_bar = unit_stiffness_apply(agg.elastic.nu, eps);
                for (int i = 0; i < 6; ++i) sig_bar[i] *= agg.elastic.E;
                double D = dmg_[e];
                if (agg.damage_on) {
                    MazarsState st{kappa_[e], dmg_[e]};
                    D = mazars_update(agg.damage, st, eps, agg.elastic.E, agg.elastic.nu).D;
                    kappa_[e] = st.kappa;
                    dmg_[e] = st.D;
                }
                const double keep = 1.0 - std::min(D, kDamageCap);
                for (int i = 0; i < 6; ++i) sig[i] = keep * sig_bar[i];
                break;
            }
            case Phase::Gel: {
                sig = gel_stress(gel, eps, eps_gel_now);
                break;
            }
        }

        // f_a = V * sigma . grad N_a with tensor shear components in 3..5.
        const double V = vol_[e];
        double* fe = f_elem_.data() + 12 * e;
        for (int a = 0; a < 4; ++a) {
            const double gx = g[3 * a], gy = g[3 * a + 1], gz = g[3 * a + 2];
            fe[3 * a] = V * (sig[0] * gx + sig[5] * gy + sig[4] * gz);
            fe[3 * a + 1] = V * (sig[5] * gx + sig[1] * gy + sig[3] * gz);
            fe[3 * a + 2] = V * (sig[4] * gx + sig[3] * gy + sig[2] * gz);
        }
    }

    // Deterministic per-node gather: every node sums its adjacent element
    // contributions in a fixed order regardless of thread count.
    const std::size_t n_nodes = mesh_.nodes.size();
    const double* fel = f_elem_.data();
    double* fi = f_int_.data();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ns = 0; ns < static_cast<std::ptrdiff_t>(n_nodes); ++ns) {
        const std::size_t n = static_cast<std::size_t>(ns);
        double fx = 0.0, fy = 0.0, fz = 0.0;
        for (std::uint32_t it = gather_offsets_[n]; it < gather_offsets_[n + 1]; ++it) {
            const std::uint32_t base = gather_items_[it];
            fx += fel[base];
            fy += fel[base + 1];
            fz += fel[base + 2];
        }
        fi[3 * n] = fx;
        fi[3 * n + 1] = fy;
        fi[3 * n + 2] = fz;
    }
}

void ExplicitSolver::check_health(long step_label) {
    const double ke = kinetic_energy();
    double u_max = 0.0;
    for (double x : u_) u_max = std::max(u_max, std::abs(x));
    const double L_max = std::max({mesh_.box.x, mesh_.box.y, mesh_.box.z}) * kMm;
    if (!std::isfinite(ke) || u_max > 0.5 * L_max) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "diverged at step %ld: kinetic energy %.3g J, max displacement %.3g m",
                      step_label, ke, u_max);
        throw NumericalError(msg);
    }
}

void ExplicitSolver::step_pseudo() {
    update_nodes(dt_);
    const ViscoStep vs =
        cfg_.paste.creep && n_paste_ > 0 ? begin_instantaneous_step(cfg_.paste.chain) : ViscoStep{};
    assemble(vs, false, 0.0);
    if (++total_steps_ % 128 == 0) check_health(total_steps_);
}

void ExplicitSolver::step_timed() {
    update_nodes(dt_);
    const ViscoStep vs = cfg_.paste.creep && n_paste_ > 0
                             ? begin_step(cfg_.paste.chain, t_real_, dt_real_)
                             : ViscoStep{};
    assemble(vs, true, dt_real_);
    ++timed_steps_;
    t_real_ = map_time(timed_steps_ - 1, dt_, cfg_.solver.T_sim, cfg_.solver.T_real).t_real;
    if (++total_steps_ % 128 == 0) check_health(total_steps_);
}

ExplicitSolver::PreloadResult ExplicitSolver::run_preload() {
    PreloadResult res;
    if (!cfg_.preload_enabled()) return res;
    const long n_ramp = std::max<long>(
        1, std::lround(cfg_.solver.preload_fraction * cfg_.solver.T_sim / dt_));
    double peak_ke = 0.0;
    for (long i = 0; i < n_ramp; ++i) {
        set_traction_scale(static_cast<double>(i + 1) / n_ramp);
        step_pseudo();
        peak_ke = std::max(peak_ke, kinetic_energy());
        ++res.steps;
    }
    set_traction_scale(1.0);
    const double tol = 1e-10 * peak_ke;
    double ke = kinetic_energy();
    const long cap = 200000;
    while (ke > tol) {
        for (int i = 0; i < 10; ++i) {
            step_pseudo();
            ++res.steps;
        }
        ke = kinetic_energy();
        if (res.steps > cap) {
            throw NumericalError("preload failed to settle within " + std::to_string(cap) +
                                 " steps; residual kinetic energy " + std::to_string(ke));
        }
    }
    res.residual_ke = ke;
    return res;
}

double ExplicitSolver::kinetic_energy() const {
    double acc = 0.0;
    for (std::size_t n = 0; n < mass_.size(); ++n) {
        const double vx = v_[3 * n], vy = v_[3 * n + 1], vz = v_[3 * n + 2];
        acc += mass_[n] * (vx * vx + vy * vy + vz * vz);
    }
    return 0.5 * acc;
}

double ExplicitSolver::kinetic_energy_cross() const {
    double acc = 0.0;
    for (std::size_t n = 0; n < mass_.size(); ++n) {
        acc += mass_[n] * (v_prev_[3 * n] * v_[3 * n] + v_prev_[3 * n + 1] * v_[3 * n + 1] +
                           v_prev_[3 * n + 2] * v_[3 * n + 2]);
    }
    return 0.5 * acc;
}

double ExplicitSolver::strain_energy() const {
    const double* u = u_.data();
    double acc = 0.0;
    for (std::size_t e = 0; e < mesh_.n_elements(); ++e) {
        const auto& g = grad_[e % 6];
        const auto& ids = mesh_.tets[e];
        Voigt eps{};
        for (int a = 0; a < 4; ++a) {
            const double gx = g[3 * a], gy = g[3 * a + 1], gz = g[3 * a + 2];
            const double ux = u[3 * ids[a]], uy = u[3 * ids[a] + 1], uz = u[3 * ids[a] + 2];
            eps[0] += gx * ux;
            eps[1] += gy * uy;
            eps[2] += gz * uz;
            eps[3] += gy * uz + gz * uy;
            eps[4] += gx * uz + gz * ux;
            eps[5] += gx * uy + gy * ux;
        }
        Voigt sig{}, eps_el = eps;
        switch (mesh_.phase[e]) {
            case Phase::Paste: {
                const double keep = 1.0 - std::min(dmg_[e], kDamageCap);
                if (cfg_.paste.creep) {
                    const std::size_t s = static_cast<std::size_t>(paste_slot_[e]);
                    for (int i = 0; i < 6; ++i) {
                        sig[i] = keep * sigma_eff_[6 * s + i];
                        eps_el[i] = eps[i] - eps_cr_[6 * s + i];
                    }
                } else {
                    sig = unit_stiffness_apply(cfg_.paste.nu, eps);
                    for (int i = 0; i < 6; ++i) sig[i] *= keep * cfg_.paste.chain.E0;
                }
                break;
            }
            case Phase::Aggregate: {
                const double keep = 1.0 - std::min(dmg_[e], kDamageCap);
                sig = unit_stiffness_apply(cfg_.aggregate.elastic.nu, eps);
                for (int i = 0; i < 6; ++i) sig[i] *= keep * cfg_.aggregate.elastic.E;
                break;
            }
            case Phase::Gel: {
                sig = gel_stress(cfg_.gel.elastic, eps, gel_state_.eps_gel);
                eps_el[0] -= gel_state_.eps_gel;
                eps_el[1] -= gel_state_.eps_gel;
                eps_el[2] -= gel_state_.eps_gel;
                break;
            }
        }
        double w = 0.0;
        for (int i = 0; i < 6; ++i) w += sig[i] * eps_el[i];
        acc += 0.5 * vol_[e] * w;
    }
    return acc;
}

Vec3 ExplicitSolver::edge_strains() const { return asrmeso::edge_strains(mesh_, u_); }

double ExplicitSolver::damaged_fraction(Phase p) const {
    return asrmeso::damaged_fraction(mesh_, dmg_, p, cfg_.output.damage_threshold);
}

double ExplicitSolver::mean_eps_gel() const { return n_gel_ > 0 ? gel_state_.eps_gel : 0.0; }

ObservableRow ExplicitSolver::observe() const {
    const Vec3 s = edge_strains();
    return {t_real_,
            s.x,
            s.y,
            s.z,
            damaged_fraction(Phase::Aggregate),
            damaged_fraction(Phase::Paste),
            mean_eps_gel()};
}

void ExplicitSolver::set_displacement(const std::vector<double>& u) {
    if (u.size() != u_.size()) throw NumericalError("displacement size does not match mesh");
    u_ = u;
}

void ExplicitSolver::recompute_internal_force() {
    const ViscoStep vs =
        cfg_.paste.creep && n_paste_ > 0 ? begin_instantaneous_step(cfg_.paste.chain) : ViscoStep{};
    assemble(vs, false, 0.0);
}

RunResult run_scenario(const Mesh& mesh, const SimulationConfig& cfg,
                       const std::function<void(const ObservableRow&)>& progress) {
    ExplicitSolver solver(mesh, cfg);
    RunResult out;
    out.dt = solver.dt();
    out.dt_real = solver.dt_real();

    const ExplicitSolver::PreloadResult pre = solver.run_preload();
    out.preload_steps = pre.steps;
    out.preload_residual_ke = pre.residual_ke;

    {
        const ObservableRow start = solver.observe();
        out.series.append(start);
        if (progress) progress(start);
    }

    const long n = solver.n_steps();
    const long stride = std::max<long>(1, n / std::max(1, cfg.output.samples));
    const long snap_stride =
        cfg.output.snapshots > 0 ? std::max<long>(1, n / cfg.output.snapshots) : 0;
    int snap_id = 0;
    if (snap_stride > 0) std::filesystem::create_directories(cfg.output.dir);

    auto snapshot = [&](long step) {
        std::vector<double> gel(mesh.n_elements(), 0.0);
        for (std::size_t e = 0; e < mesh.n_elements(); ++e) {
            if (mesh.phase[e] == Phase::Gel) gel[e] = solver.mean_eps_gel();
        }
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%04d_step%08ld.vtk", snap_id++, step);
        write_vtk(cfg.output.dir + "/" + name, mesh,
                  {{"damage", &solver.damage()}, {"eps_gel", &gel}});
    };

    for (long s = 1; s <= n; ++s) {
        solver.step_timed();
        if (s % stride == 0 || s == n) {
            const ObservableRow row = solver.observe();
            out.series.append(row);
            if (progress) progress(row);
        }
        if (snap_stride > 0 && (s % snap_stride == 0 || s == n)) snapshot(s);
    }
    out.steps = n;
    return out;
}

}
