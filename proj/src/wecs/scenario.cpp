#include "wecs/scenario.hpp"

#include "wecs/error.hpp"
#include "wecs/timeseries.hpp"

#define TOML_HEADER_ONLY 1
#include <toml.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace wecs::scenario {

using generator::EquationVariant;
using drivetrain::TorqueSignMode;

namespace {

template <class Enum>
struct Name {
    Enum value;
    std::string_view text;
};

constexpr Name<EventKind> kEventNames[] = {
    {EventKind::short_circuit, "short_circuit"}, {EventKind::restore_grid, "restore_grid"},
    {EventKind::wind_step, "wind_step"},         {EventKind::load_step, "load_step"},
    {EventKind::connect, "connect"},
};
constexpr Name<WindKind> kWindNames[] = {
    {WindKind::constant, "constant"}, {WindKind::step, "step"}, {WindKind::gust, "gust"}};
constexpr Name<EquationVariant> kVariantNames[] = {
    {EquationVariant::standard, "standard"}, {EquationVariant::uncorrected, "uncorrected"}};
constexpr Name<TorqueSignMode> kSignNames[] = {
    {TorqueSignMode::magnitude, "magnitude"}, {TorqueSignMode::signed_, "signed"}};
constexpr Name<InitialCondition> kInitialNames[] = {
    {InitialCondition::equilibrium, "equilibrium"}, {InitialCondition::zero, "zero"}};

template <class Enum, std::size_t N>
std::string_view name_of(const Name<Enum> (&table)[N], Enum value)
{
    for (const auto& entry : table)
        if (entry.value == value)
            return entry.text;
    return "?";
}

template <class Enum, std::size_t N>
Enum enum_of(const Name<Enum> (&table)[N], std::string_view text, const std::string& key)
{
    for (const auto& entry : table)
        if (entry.text == text)
            return entry.value;
    std::string allowed;
    for (const auto& entry : table) {
        if (!allowed.empty())
            allowed += ", ";
        allowed += entry.text;
    }
    throw ValidationError(key + ": unknown value '" + std::string{text} + "' (expected one of " + allowed + ")");
}

// Reads typed keys from one table and rejects keys nobody asked for.
class Section {
public:
    Section(const toml::table* table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

    bool present() const { return table_ != nullptr; }

    std::optional<double> number(std::string_view key)
    {
        const toml::node* node = find(key);
        if (node == nullptr)
            return std::nullopt;
        if (auto v = node->value<double>(); v && (node->is_floating_point() || node->is_integer()))
            return *v;
        throw ValidationError(path(key) + ": expected a number");
    }

    double required_number(std::string_view key)
    {
        if (auto v = number(key))
            return *v;
        throw ValidationError(path(key) + ": required key is missing");
    }

    double number_or(std::string_view key, double fallback) { return number(key).value_or(fallback); }

    std::optional<std::int64_t> integer(std::string_view key)
    {
        const toml::node* node = find(key);
        if (node == nullptr)
            return std::nullopt;
        if (node->is_integer())
            return node->value<std::int64_t>();
        throw ValidationError(path(key) + ": expected an integer");
    }

    std::optional<bool> boolean(std::string_view key)
    {
        const toml::node* node = find(key);
        if (node == nullptr)
            return std::nullopt;
        if (node->is_boolean())
            return node->value<bool>();
        throw ValidationError(path(key) + ": expected true or false");
    }

    std::optional<std::string> string(std::string_view key)
    {
        const toml::node* node = find(key);
        if (node == nullptr)
            return std::nullopt;
        if (node->is_string())
            return std::string{*node->value<std::string_view>()};
        throw ValidationError(path(key) + ": expected a string");
    }

    std::vector<double> numbers(std::string_view key)
    {
        std::vector<double> out;
        const toml::node* node = find(key);
        if (node == nullptr)
            return out;
        const toml::array* arr = node->as_array();
        if (arr == nullptr)
            throw ValidationError(path(key) + ": expected an array of numbers");
        for (const auto& item : *arr) {
            auto v = item.value<double>();
            if (!v || !(item.is_floating_point() || item.is_integer()))
                throw ValidationError(path(key) + ": expected an array of numbers");
            out.push_back(*v);
        }
        return out;
    }

    std::vector<std::string> strings(std::string_view key)
    {
        std::vector<std::string> out;
        const toml::node* node = find(key);
        if (node == nullptr)
            return out;
        const toml::array* arr = node->as_array();
        if (arr == nullptr)
            throw ValidationError(path(key) + ": expected an array of strings");
        for (const auto& item : *arr) {
            if (!item.is_string())
                throw ValidationError(path(key) + ": expected an array of strings");
            out.emplace_back(*item.value<std::string_view>());
        }
        return out;
    }

    std::string path(std::string_view key) const { return prefix_ + "." + std::string{key}; }

    void reject_unknown() const
    {
        if (table_ == nullptr)
            return;
        for (const auto& [key, node] : *table_)
            if (!seen_.contains(std::string{key.str()}))
                throw ValidationError(path(key.str()) + ": unknown key");
    }

private:
    const toml::node* find(std::string_view key)
    {
        seen_.insert(std::string{key});
        return table_ == nullptr ? nullptr : table_->get(key);
    }

    const toml::table* table_;
    std::string prefix_;
    std::set<std::string> seen_;
};

const toml::table* subtable(const toml::table& root, std::string_view name)
{
    const toml::node* node = root.get(name);
    if (node == nullptr)
        return nullptr;
    if (const toml::table* t = node->as_table())
        return t;
    throw ValidationError(std::string{name} + ": expected a [" + std::string{name} + "] section");
}

void require_positive(double v, const std::string& key)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(key + ": must be > 0");
}

void require_nonnegative(double v, const std::string& key)
{
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError(key + ": must be >= 0");
}

// Wraps component validation so the message carries the section name.
template <class F>
void in_section(std::string_view section, F&& check)
{
    try {
        check();
    } catch (const ValidationError& e) {
        throw ValidationError(std::string{section} + ": " + e.what());
    }
}

} // namespace

std::string_view to_string(EventKind kind) { return name_of(kEventNames, kind); }
std::string_view to_string(WindKind kind) { return name_of(kWindNames, kind); }
std::string_view to_string(EquationVariant variant) { return name_of(kVariantNames, variant); }
std::string_view to_string(TorqueSignMode mode) { return name_of(kSignNames, mode); }
std::string_view to_string(InitialCondition initial) { return name_of(kInitialNames, initial); }

const std::vector<std::string>& all_channels()
{
    static const std::vector<std::string> channels{"Id", "Iq", "Idr", "Iqr", "s", "omega_r", "MuT", "MeG", "v", "Ud"};
    return channels;
}

double WindProfile::at(double t) const
{
    if (kind != WindKind::gust)
        return speed;
    if (t <= times.front())
        return speeds.front();
    if (t >= times.back())
        return speeds.back();
    const auto upper = std::upper_bound(times.begin(), times.end(), t);
    const auto i = static_cast<std::size_t>(upper - times.begin());
    const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
    return speeds[i - 1] + w * (speeds[i] - speeds[i - 1]);
}

turbine::TurbineModel build_turbine(const TurbineConfig& cfg)
{
    turbine::TurbineModel m;
    m.geometry = turbine::TurbineGeometry::from_radius(cfg.radius, cfg.swept_area);
    m.air.rho = cfg.rho;
    turbine::validate(m.air);
    m.coefficients = turbine::fit_coefficients(cfg.lambda0, cfg.alpha, cfg.beta, cfg.simplified);
    return m;
}

drivetrain::CoupledSystem build_system(const Scenario& s)
{
    drivetrain::CoupledSystem sys;
    sys.turbine = build_turbine(s.turbine);
    sys.generator = s.generator;
    sys.variant = s.variant;
    sys.drivetrain = s.drivetrain;
    return sys;
}

generator::GridInput nominal_grid(const Scenario& s)
{
    generator::GridInput g;
    g.u_d = s.converter ? s.converter->modulation_index * s.converter->v_cc / 2.0 : s.grid.u_d.value_or(0.0);
    g.u_q = s.grid.u_q;
    return g;
}

void validate(const Scenario& s)
{
    require_positive(s.turbine.radius, "turbine.radius");
    if (s.turbine.swept_area)
        require_positive(*s.turbine.swept_area, "turbine.swept_area");
    require_positive(s.turbine.rho, "turbine.rho");
    in_section("turbine", [&] { build_turbine(s.turbine); });

    in_section("generator", [&] { generator::validate(s.generator); });
    require_positive(s.generator.u_rated, "generator.u_rated");
    require_positive(s.generator.f_rated, "generator.f_rated");
    require_positive(s.generator.m_rated, "generator.m_rated");

    in_section("drivetrain", [&] { drivetrain::validate(s.drivetrain); });

    if (s.converter) {
        if (s.grid.u_d)
            throw ValidationError("grid.ud: must be omitted when a [converter] section sets the stator voltage");
        require_positive(s.converter->v_cc, "converter.vcc");
        if (!(s.converter->modulation_index > 0.0 && s.converter->modulation_index <= 1.0))
            throw ValidationError("converter.modulation_index: must lie in (0, 1]");
    } else if (!s.grid.u_d) {
        throw ValidationError("grid.ud: required key is missing");
    }
    if (s.grid.u_d && !std::isfinite(*s.grid.u_d))
        throw ValidationError("grid.ud: must be finite");
    if (!std::isfinite(s.grid.u_q))
        throw ValidationError("grid.uq: must be finite");

    const auto& solver = s.solver;
    require_positive(solver.dt, "solver.dt");
    require_positive(solver.t_end, "solver.t_end");
    if (solver.method != "rk4")
        throw ValidationError("solver.method: only 'rk4' is supported");
    if (solver.decimation < 1)
        throw ValidationError("solver.decimation: must be >= 1");
    const double steps = solver.t_end / solver.dt;
    const double interval = static_cast<double>(solver.decimation);
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps ||
        std::llround(steps) % static_cast<long long>(solver.decimation) != 0 || steps / interval < 1.0 - 1e-12)
        throw ValidationError("solver.t_end: must be a whole number of output intervals (dt * decimation)");
    if (!std::isfinite(solver.initial_slip))
        throw ValidationError("solver.initial_slip: must be finite");

    const auto& w = s.wind;
    require_nonnegative(w.speed, "wind.speed");
    switch (w.kind) {
    case WindKind::constant:
        break;
    case WindKind::step:
        require_nonnegative(w.step_speed, "wind.step_speed");
        if (!(w.step_time >= 0.0 && w.step_time <= solver.t_end))
            throw ValidationError("wind.step_time: must lie in [0, t_end]");
        break;
    case WindKind::gust:
        if (w.times.empty() || w.times.size() != w.speeds.size())
            throw ValidationError("wind.times: gust profile needs matching non-empty times and speeds");
        for (std::size_t i = 0; i < w.times.size(); ++i) {
            if (!std::isfinite(w.times[i]) || (i > 0 && !(w.times[i] > w.times[i - 1])))
                throw ValidationError("wind.times: must be strictly increasing");
            require_nonnegative(w.speeds[i], "wind.speeds");
        }
        break;
    }

    for (std::size_t i = 0; i < s.events.size(); ++i) {
        const Event& e = s.events[i];
        const std::string key = "events[" + std::to_string(i) + "]";
        if (!(e.t >= 0.0 && e.t <= solver.t_end))
            throw ValidationError(key + ".t: event outside the horizon [0, t_end]");
        if (i > 0 && !(e.t > s.events[i - 1].t))
            throw ValidationError(key + ".t: events must be strictly ordered in time");
        if (e.kind == EventKind::wind_step)
            require_nonnegative(e.value, key + ".value");
        if (!std::isfinite(e.value))
            throw ValidationError(key + ".value: must be finite");
    }

    for (const auto& c : s.output.channels)
        if (std::find(all_channels().begin(), all_channels().end(), c) == all_channels().end())
            throw ValidationError("output.channels: unknown channel '" + c + "'");
}

Scenario parse(std::string_view toml_text, std::string_view source)
{
    toml::table root;
    try {
        root = toml::parse(toml_text, source);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
            << e.description();
        throw ValidationError(msg.str());
    }

    static const std::set<std::string_view> sections{"name",  "turbine", "generator", "drivetrain", "grid",
                                                     "converter", "wind", "events", "solver", "output"};
    for (const auto& [key, node] : root)
        if (!sections.contains(key.str()))
            throw ValidationError(std::string{key.str()} + ": unknown section or key");

    Scenario s;
    if (const toml::node* n = root.get("name")) {
        if (!n->is_string())
            throw ValidationError("name: expected a string");
        s.name = std::string{*n->value<std::string_view>()};
    }

    {
        Section t{subtable(root, "turbine"), "turbine"};
        s.turbine.radius = t.required_number("radius");
        s.turbine.swept_area = t.number("swept_area");
        s.turbine.rho = t.number_or("rho", s.turbine.rho);
        s.turbine.lambda0 = t.number_or("lambda0", s.turbine.lambda0);
        s.turbine.alpha = t.number_or("alpha", s.turbine.alpha);
        s.turbine.beta = t.number_or("beta", s.turbine.beta);
        s.turbine.simplified = t.boolean("simplified").value_or(false);
        t.reject_unknown();
    }
    {
        Section g{subtable(root, "generator"), "generator"};
        auto& p = s.generator;
        p.r1 = g.required_number("r1");
        p.r2 = g.required_number("r2");
        p.l1 = g.required_number("l1");
        p.l2 = g.required_number("l2");
        p.m = g.required_number("m");
        const auto pp = g.integer("pole_pairs");
        if (!pp)
            throw ValidationError("generator.pole_pairs: required key is missing");
        if (*pp < 1 || *pp > 1000)
            throw ValidationError("generator.pole_pairs: must be a positive integer");
        p.pole_pairs = static_cast<int>(*pp);
        p.omega_s = g.required_number("omega_s");
        p.u_rated = g.required_number("u_rated");
        p.f_rated = g.required_number("f_rated");
        p.m_rated = g.required_number("m_rated");
        p.torque_constant = g.number("torque_constant");
        if (auto v = g.string("variant"))
            s.variant = enum_of(kVariantNames, *v, "generator.variant");
        g.reject_unknown();
    }
    {
        Section d{subtable(root, "drivetrain"), "drivetrain"};
        s.drivetrain.inertia = d.required_number("inertia");
        s.drivetrain.gear_ratio = d.number_or("gear_ratio", 1.0);
        if (auto v = d.string("torque_sign_mode"))
            s.drivetrain.torque_sign_mode = enum_of(kSignNames, *v, "drivetrain.torque_sign_mode");
        d.reject_unknown();
    }
    {
        Section g{subtable(root, "grid"), "grid"};
        s.grid.u_d = g.number("ud");
        s.grid.u_q = g.number_or("uq", 0.0);
        s.grid.connected = g.boolean("connected").value_or(true);
        g.reject_unknown();
    }
    if (const toml::table* tbl = subtable(root, "converter")) {
        Section c{tbl, "converter"};
        s.converter = ConverterConfig{c.required_number("vcc"), c.required_number("modulation_index")};
        c.reject_unknown();
    }
    {
        Section w{subtable(root, "wind"), "wind"};
        if (auto v = w.string("profile"))
            s.wind.kind = enum_of(kWindNames, *v, "wind.profile");
        switch (s.wind.kind) {
        case WindKind::constant:
            s.wind.speed = w.required_number("speed");
            break;
        case WindKind::step:
            s.wind.speed = w.required_number("speed");
            s.wind.step_time = w.required_number("step_time");
            s.wind.step_speed = w.required_number("step_speed");
            break;
        case WindKind::gust:
            s.wind.times = w.numbers("times");
            s.wind.speeds = w.numbers("speeds");
            if (s.wind.speeds.empty())
                throw ValidationError("wind.speeds: required for a gust profile");
            s.wind.speed = s.wind.speeds.front();
            break;
        }
        w.reject_unknown();
    }
    if (const toml::node* n = root.get("events")) {
        const toml::array* arr = n->as_array();
        if (arr == nullptr)
            throw ValidationError("events: expected an array of tables ([[events]])");
        for (std::size_t i = 0; i < arr->size(); ++i) {
            const toml::table* tbl = (*arr)[i].as_table();
            const std::string prefix = "events[" + std::to_string(i) + "]";
            if (tbl == nullptr)
                throw ValidationError(prefix + ": expected a table");
            Section e{tbl, prefix};
            Event ev;
            ev.t = e.required_number("t");
            const auto kind = e.string("kind");
            if (!kind)
                throw ValidationError(prefix + ".kind: required key is missing");
            ev.kind = enum_of(kEventNames, *kind, prefix + ".kind");
            const auto value = e.number("value");
            if ((ev.kind == EventKind::wind_step || ev.kind == EventKind::load_step) && !value)
                throw ValidationError(prefix + ".value: required for " + *kind);
            ev.value = value.value_or(0.0);
            e.reject_unknown();
            s.events.push_back(ev);
        }
    }
    {
        Section v{subtable(root, "solver"), "solver"};
        s.solver.dt = v.number_or("dt", s.solver.dt);
        s.solver.t_end = v.required_number("t_end");
        s.solver.method = v.string("method").value_or("rk4");
        if (auto d = v.integer("decimation"))
            s.solver.decimation = static_cast<int>(std::clamp<std::int64_t>(*d, -1, 1'000'000'000));
        if (auto i = v.string("initial"))
            s.solver.initial = enum_of(kInitialNames, *i, "solver.initial");
        s.solver.initial_slip = v.number_or("initial_slip", 0.0);
        v.reject_unknown();
    }
    {
        Section o{subtable(root, "output"), "output"};
        s.output.channels = o.strings("channels");
        o.reject_unknown();
    }

    validate(s);
    return s;
}

Scenario load(const std::filesystem::path& path)
{
    std::ifstream file{path, std::ios::binary};
    if (!file)
        throw ValidationError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    Scenario s = parse(buffer.str(), path.string());
    return s;
}

namespace {

void put(std::string& out, std::string_view key, double v)
{
    out += key;
    out += " = ";
    const std::string text = format_number(v);
    out += text;
    // TOML needs a fraction or exponent to read the value back as a float.
    if (text.find_first_of(".eEn") == std::string::npos)
        out += ".0";
    out += '\n';
}

void put(std::string& out, std::string_view key, std::string_view v)
{
    out += key;
    out += " = \"";
    for (char ch : v) {
        if (ch == '"' || ch == '\\')
            out += '\\';
        out += ch;
    }
    out += "\"\n";
}

void put_bool(std::string& out, std::string_view key, bool v)
{
    out += key;
    out += v ? " = true\n" : " = false\n";
}

void put_int(std::string& out, std::string_view key, long long v)
{
    out += key;
    out += " = ";
    out += std::to_string(v);
    out += '\n';
}

void put_array(std::string& out, std::string_view key, const std::vector<double>& values)
{
    out += key;
    out += " = [";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ", ";
        std::string text = format_number(values[i]);
        if (text.find_first_of(".eEn") == std::string::npos)
            text += ".0";
        out += text;
    }
    out += "]\n";
}

} // namespace

std::string dump(const Scenario& s)
{
    std::string out;
    if (!s.name.empty())
        put(out, "name", s.name);

    out += "\n[turbine]\n";
    put(out, "radius", s.turbine.radius);
    if (s.turbine.swept_area)
        put(out, "swept_area", *s.turbine.swept_area);
    put(out, "rho", s.turbine.rho);
    put(out, "lambda0", s.turbine.lambda0);
    put(out, "alpha", s.turbine.alpha);
    put(out, "beta", s.turbine.beta);
    put_bool(out, "simplified", s.turbine.simplified);

    const auto& g = s.generator;
    out += "\n[generator]\n";
    put(out, "r1", g.r1);
    put(out, "r2", g.r2);
    put(out, "l1", g.l1);
    put(out, "l2", g.l2);
    put(out, "m", g.m);
    put_int(out, "pole_pairs", g.pole_pairs);
    put(out, "omega_s", g.omega_s);
    put(out, "u_rated", g.u_rated);
    put(out, "f_rated", g.f_rated);
    put(out, "m_rated", g.m_rated);
    if (g.torque_constant)
        put(out, "torque_constant", *g.torque_constant);
    put(out, "variant", to_string(s.variant));

    out += "\n[drivetrain]\n";
    put(out, "inertia", s.drivetrain.inertia);
    put(out, "gear_ratio", s.drivetrain.gear_ratio);
    put(out, "torque_sign_mode", to_string(s.drivetrain.torque_sign_mode));

    out += "\n[grid]\n";
    if (s.grid.u_d)
        put(out, "ud", *s.grid.u_d);
    put(out, "uq", s.grid.u_q);
    put_bool(out, "connected", s.grid.connected);

    if (s.converter) {
        out += "\n[converter]\n";
        put(out, "vcc", s.converter->v_cc);
        put(out, "modulation_index", s.converter->modulation_index);
    }

    out += "\n[wind]\n";
    put(out, "profile", to_string(s.wind.kind));
    switch (s.wind.kind) {
    case WindKind::constant:
        put(out, "speed", s.wind.speed);
        break;
    case WindKind::step:
        put(out, "speed", s.wind.speed);
        put(out, "step_time", s.wind.step_time);
        put(out, "step_speed", s.wind.step_speed);
        break;
    case WindKind::gust:
        put_array(out, "times", s.wind.times);
        put_array(out, "speeds", s.wind.speeds);
        break;
    }

    for (const Event& e : s.events) {
        out += "\n[[events]]\n";
        put(out, "t", e.t);
        put(out, "kind", to_string(e.kind));
        if (e.kind == EventKind::wind_step || e.kind == EventKind::load_step || e.value != 0.0)
            put(out, "value", e.value);
    }

    out += "\n[solver]\n";
    put(out, "dt", s.solver.dt);
    put(out, "t_end", s.solver.t_end);
    put(out, "method", s.solver.method);
    put_int(out, "decimation", s.solver.decimation);
    put(out, "initial", to_string(s.solver.initial));
    put(out, "initial_slip", s.solver.initial_slip);

    if (!s.output.channels.empty()) {
        out += "\n[output]\nchannels = [";
        for (std::size_t i = 0; i < s.output.channels.size(); ++i) {
            if (i)
                out += ", ";
            out += '"' + s.output.channels[i] + '"';
        }
        out += "]\n";
    }
    return out;
}

} // namespace wecs::scenario
