#include "wecs/generator.hpp"

#include "wecs/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace wecs::generator {
namespace {

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ValidationError(std::string{"generator "} + name + " must be > 0");
}

} // namespace

void validate(const GeneratorParams& p)
{
    require_positive(p.r1, "r1");
    require_positive(p.r2, "r2");
    require_positive(p.l1, "l1");
    require_positive(p.l2, "l2");
    require_positive(p.m, "m");
    require_positive(p.omega_s, "omega_s");
    if (p.pole_pairs < 1)
        throw ValidationError("generator pole_pairs must be >= 1");
    if (!(p.leakage_determinant() > 0.0))
        throw ValidationError("generator inductances violate l1*l2 - m^2 > 0");
    const double sigma = p.leakage_coefficient();
    if (!(sigma > 0.0 && sigma < 0.3))
        throw ValidationError("generator leakage coefficient sigma = " + std::to_string(sigma) +
                              " outside (0, 0.3)");
    if (p.torque_constant && !(*p.torque_constant > 0.0))
        throw ValidationError("generator torque_constant must be > 0");
}

double torque_constant(const GeneratorParams& params, EquationVariant variant)
{
    if (params.torque_constant)
        return *params.torque_constant;
    return variant == EquationVariant::standard ? 1.5 * params.pole_pairs : 1.0;
}

CurrentVector ElectricalSystem::derivative(const CurrentVector& x, const GridInput& grid) const
{
    CurrentVector dx{};
    for (std::size_t row = 0; row < 4; ++row) {
        double acc = b[row][0] * grid.u_d + b[row][1] * grid.u_q;
        for (std::size_t col = 0; col < 4; ++col)
            acc += a[row][col] * x[col];
        dx[row] = acc;
    }
    return dx;
}

ElectricalSystem electrical_system(const GeneratorParams& p, double slip, EquationVariant variant)
{
    const double det = p.leakage_determinant();
    if (!(det > 0.0))
        throw ValidationError("generator inductances violate l1*l2 - m^2 > 0");

    const double w = p.omega_s;
    const double w_rotor = (1.0 - slip) * w;  // omega_M
    const bool uncorrected = variant == EquationVariant::uncorrected;
    // Rotor rows see the frame at the slip speed omega - omega_M. The uncorrected
    // form multiplies those terms by s once more.
    const double w_slip = uncorrected ? (w - w_rotor) * slip : (w - w_rotor);
    const double l1 = p.l1, l2 = p.l2, m = p.m, r1 = p.r1, r2 = p.r2;

    ElectricalSystem sys;
    auto& a = sys.a;
    auto& b = sys.b;

    a[0] = {-l2 * r1, w * l1 * l2 - m * m * w_slip, r2 * m,
            (uncorrected ? m * w * l2 / l1 : m * w * l2) - m * l2 * w_slip};
    a[1] = {-w * l1 * l2 + m * m * w_slip, -r1 * l2, -m * l2 * w + m * l2 * w_slip, r2 * m};
    a[2] = {m * r1, -l1 * m * w + m * l1 * w_slip, -r2 * l1, -m * m * w + l1 * l2 * w_slip};
    a[3] = {l1 * m * w - m * l1 * w_slip, m * r1, m * m * w - l1 * l2 * w_slip, -l1 * r2};

    b[0] = {l2, 0.0};
    b[1] = {0.0, uncorrected ? 0.0 : l2};
    b[2] = {-m, 0.0};
    b[3] = {0.0, uncorrected ? 0.0 : -m};

    for (auto& row : a)
        for (auto& v : row)
            v /= det;
    for (auto& row : b)
        for (auto& v : row)
            v /= det;
    return sys;
}

CurrentVector electrical_derivative(const GeneratorParams& params, const GeneratorState& state,
                                    const GridInput& grid, EquationVariant variant)
{
    validate(params);
    const CurrentVector x = currents_of(state);
    for (double v : x)
        if (!std::isfinite(v))
            throw NumericalError("non-finite generator current");
    if (!std::isfinite(state.slip) || !std::isfinite(grid.u_d) || !std::isfinite(grid.u_q))
        throw NumericalError("non-finite slip or grid voltage");
    return electrical_system(params, state.slip, variant).derivative(x, grid);
}

CurrentVector open_stator_derivative(const GeneratorParams& p, const GeneratorState& s)
{
    const double w_slip = s.slip * p.omega_s;
    return {0.0, 0.0, -p.r2 / p.l2 * s.i_dr + w_slip * s.i_qr, -p.r2 / p.l2 * s.i_qr - w_slip * s.i_dr};
}

double electromagnetic_torque(const GeneratorParams& p, const GeneratorState& s, EquationVariant variant)
{
    return torque_constant(p, variant) * p.m * (s.i_d * s.i_qr - s.i_q * s.i_dr);
}

double slip_derivative(const GeneratorParams& p, const GeneratorState& s, double m_mech, double inertia,
                       EquationVariant variant)
{
    if (!(inertia > 0.0))
        throw ValidationError("inertia must be > 0");
    if (variant == EquationVariant::uncorrected) {
        const double k = 1.0 / (2.0 * std::numbers::pi);
        return k * p.m * s.i_d * s.i_qr - k * p.m * s.i_q * s.i_dr + k * m_mech;
    }
    const double m_e = electromagnetic_torque(p, s, variant);
    return -(p.pole_pairs / (p.omega_s * inertia)) * (m_mech - m_e);
}

CurrentVector steady_state_currents(const GeneratorParams& params, double slip, const GridInput& grid,
                                    EquationVariant variant)
{
    const ElectricalSystem sys = electrical_system(params, slip, variant);
    // Solve a * x = -b * u by Gaussian elimination with partial pivoting.
    Matrix4 a = sys.a;
    CurrentVector rhs{};
    for (std::size_t i = 0; i < 4; ++i)
        rhs[i] = -(sys.b[i][0] * grid.u_d + sys.b[i][1] * grid.u_q);

    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row)
            scale = std::max(scale, std::abs(v));

    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        if (std::abs(a[pivot][col]) <= 1e-14 * scale)
            throw NumericalError("singular electrical system at slip " + std::to_string(slip));
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < 4; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 4; ++c)
                a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    CurrentVector x{};
    for (std::size_t i = 4; i-- > 0;) {
        double acc = rhs[i];
        for (std::size_t c = i + 1; c < 4; ++c)
            acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

} // namespace wecs::generator
