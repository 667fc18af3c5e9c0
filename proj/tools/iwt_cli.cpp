// iwt: command-line front end for the index Whittaker transform library.
//
// Exit codes: 0 success, 1 a verified identity failed, 2 usage error or
// malformed input, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <iwt/iwt.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace iwt;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double x_min = 1e-3;
    double x_max = 40;
    std::size_t nodes = 64;
    double scale = 4;

    std::vector<double> make() const {
        if (!(x_min > 0) || !(x_max > x_min) || nodes < 3 || !(scale > 0))
            throw UsageError("grid: need 0 < x_min < x_max, nodes >= 3, scale > 0");
        return log_linear_grid(x_min, x_max, nodes, scale);
    }
};

struct RunConfig {
    QuadratureConfig quad;
    GridSpec grid;
    std::string format = "csv";
    int verbosity = 0;
};

json to_json(const RunConfig& c) {
    return {{"quadrature",
             {{"rel_tol", c.quad.rel_tol},
              {"abs_tol", c.quad.abs_tol},
              {"max_refinement_levels", c.quad.max_refinement_levels},
              {"x_truncation_bound", c.quad.x_truncation_bound},
              {"tau_max", c.quad.tau_max}}},
            {"grid", {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"nodes", c.grid.nodes}, {"scale", c.grid.scale}}},
            {"format", c.format},
            {"verbosity", c.verbosity}};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// JSON text to a value, with parse errors reported as line:column.
json parse_json(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') ++line, col = 1;
            else ++col;
        }
        std::string what = e.what();
        if (auto p = what.find("syntax error"); p != std::string::npos) what = what.substr(p);
        throw ParseError(source, line, col, what);
    }
}

void check_keys(const json& j, const std::vector<std::string>& allowed, const std::string& where, const std::string& source) {
    if (!j.is_object()) throw ParseError(source, 1, 1, where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            throw ParseError(source, 1, 1, "unknown key '" + k + "' in " + where);
}

template <class T>
T get(const json& j, const char* key, const std::string& where, const std::string& source) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ParseError(source, 1, 1, std::string("bad or missing '") + key + "' in " + where);
    }
}

void apply_config(RunConfig& c, const json& j, const std::string& src) {
    check_keys(j, {"quadrature", "grid", "format", "verbosity"}, "config", src);
    if (j.contains("quadrature")) {
        const auto& q = j["quadrature"];
        check_keys(q, {"rel_tol", "abs_tol", "max_refinement_levels", "x_truncation_bound", "tau_max"}, "quadrature", src);
        if (q.contains("rel_tol")) c.quad.rel_tol = get<double>(q, "rel_tol", "quadrature", src);
        if (q.contains("abs_tol")) c.quad.abs_tol = get<double>(q, "abs_tol", "quadrature", src);
        if (q.contains("max_refinement_levels"))
            c.quad.max_refinement_levels = get<int>(q, "max_refinement_levels", "quadrature", src);
        if (q.contains("x_truncation_bound")) c.quad.x_truncation_bound = get<double>(q, "x_truncation_bound", "quadrature", src);
        if (q.contains("tau_max")) c.quad.tau_max = get<double>(q, "tau_max", "quadrature", src);
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        check_keys(g, {"x_min", "x_max", "nodes", "scale"}, "grid", src);
        if (g.contains("x_min")) c.grid.x_min = get<double>(g, "x_min", "grid", src);
        if (g.contains("x_max")) c.grid.x_max = get<double>(g, "x_max", "grid", src);
        if (g.contains("nodes")) c.grid.nodes = get<std::size_t>(g, "nodes", "grid", src);
        if (g.contains("scale")) c.grid.scale = get<double>(g, "scale", "grid", src);
    }
    if (j.contains("format")) c.format = get<std::string>(j, "format", "config", src);
    if (j.contains("verbosity")) c.verbosity = get<int>(j, "verbosity", "config", src);
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw UsageError(what + ": not a number: '" + s + "'");
    return v;
}

// "1.5", "-0.3i", "1+2i", "0.5-0.25i"
cplx parse_complex(const std::string& s, const std::string& what) {
    if (s.empty()) throw UsageError(what + ": empty value");
    if (s.back() != 'i') return parse_double(s, what);
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < body.size(); ++i)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
    auto imag = [&](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t[0] == '+' ? t.substr(1) : t, what);
    };
    if (split == std::string::npos) return {0.0, imag(body)};
    return {parse_double(body.substr(0, split), what), imag(body.substr(split))};
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(item, what));
    if (out.empty()) throw UsageError(what + ": empty list");
    return out;
}

// "start:step:stop" or a comma list
std::vector<double> parse_range(const std::string& s, const std::string& what) {
    if (s.find(':') == std::string::npos) return parse_list(s, what);
    std::stringstream ss(s);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c);
    const double lo = parse_double(a, what), step = parse_double(b, what), hi = parse_double(c, what);
    if (!(step > 0) || !(hi >= lo)) throw UsageError(what + ": need step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * double(i);
    return out;
}

GridSpec parse_grid(const std::string& s, GridSpec g) {
    std::stringstream ss(s);
    std::string a, b, c;
    std::getline(ss, a, ':');
    std::getline(ss, b, ':');
    std::getline(ss, c);
    if (c.empty()) throw UsageError("--grid: expected x_min:x_max:nodes");
    g.x_min = parse_double(a, "--grid");
    g.x_max = parse_double(b, "--grid");
    const double n = parse_double(c, "--grid");
    if (!(n >= 3) || n != std::floor(n)) throw UsageError("--grid: nodes must be an integer >= 3");
    g.nodes = static_cast<std::size_t>(n);
    return g;
}

DecayClass parse_decay_flag(const std::string& s) {
    const auto v = parse_list(s, "--decay");
    if (v.size() != 3) throw UsageError("--decay: expected power_at_zero,power_at_infinity,rate_at_infinity");
    return {v[0], v[1], v[2]};
}

DecayClass decay_from_json(const json& j, const std::string& src) {
    check_keys(j, {"power_at_zero", "power_at_infinity", "rate_at_infinity"}, "decay", src);
    DecayClass d;
    if (j.contains("power_at_zero")) d.power_at_zero = get<double>(j, "power_at_zero", "decay", src);
    if (j.contains("power_at_infinity")) d.power_at_infinity = get<double>(j, "power_at_infinity", "decay", src);
    if (j.contains("rate_at_infinity")) d.rate_at_infinity = get<double>(j, "rate_at_infinity", "decay", src);
    return d;
}

// Decay class from a flag, else from the sidecar <csv>.decay.json; one of them must exist.
DecayClass resolve_decay(const std::string& csv, const std::string& flag) {
    if (!flag.empty()) return parse_decay_flag(flag);
    const std::string side = csv + ".decay.json";
    if (std::filesystem::exists(side)) return decay_from_json(parse_json(read_file(side), side), side);
    throw UsageError("no decay class for '" + csv + "': pass --decay p0,pinf,q or provide " + side);
}

GridFunction load_grid_function(const std::string& path, const DecayClass& d) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return read_grid_function(in, d, path);
}

// Output sink: a file when --output is given, otherwise standard output.
// Summaries go to standard output only when the data went to a file.
struct Sink {
    std::ofstream file;
    std::ostream* data = &std::cout;
    std::ostream* summary = &std::cerr;

    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file.open(path, std::ios::binary);
            if (!file) throw UsageError("cannot write '" + path + "'");
            data = &file;
            summary = &std::cout;
        }
    }
};

// Tails of a written GridFunction go next to it as <output>.decay.json.
void write_decay_sidecar(const std::string& output, const DecayClass& d) {
    if (output.empty()) return;
    std::ofstream f(output + ".decay.json", std::ios::binary);
    if (!f) throw UsageError("cannot write '" + output + ".decay.json'");
    const json j = {{"power_at_zero", d.power_at_zero},
                    {"power_at_infinity", d.power_at_infinity},
                    {"rate_at_infinity", d.rate_at_infinity}};
    f << j.dump(2) << '\n';
}

json params_json(const ParamSet& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

json report_json(const VerifyReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples)
        samples.push_back({{"params", params_json(s.params)},
                           {"lhs", {s.check.lhs.real(), s.check.lhs.imag()}},
                           {"rhs", {s.check.rhs.real(), s.check.rhs.imag()}},
                           {"residual", s.check.residual},
                           {"pass", s.pass}});
    return {{"identity", r.identity},
            {"tolerance", r.tolerance},
            {"max_residual", r.max_residual},
            {"pass", r.pass},
            {"samples", samples}};
}

// EquationSpec from JSON; relative paths are taken from the spec's directory.
EquationSpec load_equation(const std::string& path, std::optional<GridSpec>& grid_out, const GridSpec& grid_default) {
    const json j = parse_json(read_file(path), path);
    check_keys(j, {"a", "nu", "theta", "h", "grid"}, "equation spec", path);
    const auto dir = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        const std::filesystem::path q(p);
        return (q.is_absolute() ? q : dir / q).string();
    };
    auto load_fn = [&](const json& f, const char* what) {
        if (f.is_string()) {
            const std::string csv = resolve(f.get<std::string>());
            return load_grid_function(csv, resolve_decay(csv, ""));
        }
        check_keys(f, {"csv", "decay"}, what, path);
        const std::string csv = resolve(get<std::string>(f, "csv", what, path));
        const DecayClass d = f.contains("decay") ? decay_from_json(f["decay"], path) : resolve_decay(csv, "");
        return load_grid_function(csv, d);
    };
    EquationSpec s;
    if (!j.contains("theta") || !j.contains("h")) throw ParseError(path, 1, 1, "equation spec needs 'theta' and 'h'");
    const json& th = j["theta"];
    const std::string kind = get<std::string>(th, "kind", "theta", path);
    s.nu = j.contains("nu") ? get<double>(j, "nu", "equation spec", path) : 0.0;
    if (kind == "lebedev") {
        check_keys(th, {"kind", "n"}, "theta", path);
        const int n = get<int>(th, "n", "theta", path);
        s.theta = LebedevKernel{n};
        s.a = n + 0.5;
        if (j.contains("a") && std::abs(get<double>(j, "a", "equation spec", path) - s.a) > 1e-12)
            throw UsageError("equation spec: the Lebedev kernel of order n needs a = n + 1/2");
    } else {
        s.a = get<double>(j, "a", "equation spec", path);
        if (kind == "power") {
            check_keys(th, {"kind", "lambda", "beta"}, "theta", path);
            auto cx = [&](const char* key) {
                const json& v = th.at(key);
                if (v.is_number()) return cplx(v.get<double>());
                if (v.is_array() && v.size() == 2) return cplx(v[0].get<double>(), v[1].get<double>());
                throw ParseError(path, 1, 1, std::string("theta.") + key + " must be a number or [re, im]");
            };
            if (!th.contains("lambda") || !th.contains("beta")) throw ParseError(path, 1, 1, "power kernel needs lambda and beta");
            s.theta = PowerKernel{cx("lambda"), cx("beta")};
        } else if (kind == "grid") {
            check_keys(th, {"kind", "csv", "decay"}, "theta", path);
            json f = th;
            f.erase("kind");
            s.theta = load_fn(f, "theta");
        } else {
            throw ParseError(path, 1, 1, "theta.kind must be lebedev, power or grid");
        }
    }
    s.h = load_fn(j["h"], "h");
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        check_keys(g, {"x_min", "x_max", "nodes", "scale"}, "grid", path);
        GridSpec gs = grid_default;
        if (g.contains("x_min")) gs.x_min = get<double>(g, "x_min", "grid", path);
        if (g.contains("x_max")) gs.x_max = get<double>(g, "x_max", "grid", path);
        if (g.contains("nodes")) gs.nodes = get<std::size_t>(g, "nodes", "grid", path);
        if (g.contains("scale")) gs.scale = get<double>(g, "scale", "grid", path);
        grid_out = gs;
    }
    return s;
}

std::string registry_help() {
    std::string s = "Identities:\n";
    for (const auto& id : identity_registry()) {
        s += "  " + id.name + "\n      " + id.formula + "\n      parameters:";
        for (const auto& [k, v] : id.defaults) s += " " + k + "=" + format_double(v);
        s += "\n      tolerance: " + format_double(id.tolerance) + (id.absolute ? " (absolute)" : " (relative)") + "\n";
    }
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Index Whittaker transform toolkit"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    std::string config_path, tol_flag, grid_flag, output, format_flag;
    bool show_config = false;
    int verbosity = -1;
    app.add_option("--config", config_path, "JSON configuration file");
    app.add_flag("--show-config", show_config, "print the effective configuration and exit");
    app.add_option("--tol", tol_flag, "relative quadrature tolerance");
    app.add_option("--grid", grid_flag, "output grid x_min:x_max:nodes");
    app.add_option("--output,-o", output, "output file (default: standard output)");
    app.add_option("--format", format_flag, "csv or json");
    app.add_option("--verbosity", verbosity, "diagnostic level");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a special function at real arguments");
    std::string fn, e_a, e_b, e_alpha, e_nu, e_mu;
    std::vector<std::string> e_args;
    eval->add_option("function", fn, "gamma | psi | whittaker_w | parabolic_d | bessel_k")->required();
    eval->add_option("args", e_args, "arguments")->required();
    eval->add_option("--a", e_a, "first parameter of psi");
    eval->add_option("--b", e_b, "second parameter of psi");
    eval->add_option("--alpha", e_alpha, "first index of whittaker_w");
    eval->add_option("--nu", e_nu, "order (whittaker_w, bessel_k)");
    eval->add_option("--mu", e_mu, "order of parabolic_d");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "tabulate the product-formula kernel q_a (or k_alpha)");
    std::string k_a, k_alpha, k_x, k_y, k_xi;
    kernel->add_option("--a", k_a, "order of q_a (a >= 0)");
    kernel->add_option("--alpha", k_alpha, "order of k_alpha (complex allowed)");
    kernel->add_option("--x", k_x, "comma list")->required();
    kernel->add_option("--y", k_y, "comma list")->required();
    kernel->add_option("--xi", k_xi, "comma list")->required();

    // translate
    auto* translate_cmd = app.add_subcommand("translate", "generalized translation T_a^y f");
    double t_a = 0, t_y = 0;
    std::string t_in, t_decay;
    translate_cmd->add_option("--a", t_a, "order a >= 0")->required();
    translate_cmd->add_option("--y", t_y, "translation parameter")->required();
    translate_cmd->add_option("input,--input", t_in, "f as CSV x,re,im")->required();
    translate_cmd->add_option("--decay", t_decay, "decay class of f: p0,pinf,q");

    // convolve
    auto* convolve_cmd = app.add_subcommand("convolve", "index Whittaker convolution f *_a g");
    double c_a = 0;
    std::string c_f, c_g, c_df, c_dg;
    convolve_cmd->add_option("--a", c_a, "order a >= 0")->required();
    convolve_cmd->add_option("f", c_f, "f as CSV")->required();
    convolve_cmd->add_option("g", c_g, "g as CSV")->required();
    convolve_cmd->add_option("--decay", c_df, "decay class of f");
    convolve_cmd->add_option("--decay-g", c_dg, "decay class of g");

    // transform
    auto* transform_cmd = app.add_subcommand("transform", "forward transform on a tau grid");
    double f_a = 0;
    std::string f_in, f_decay, f_tau = "0:0.1:5";
    transform_cmd->add_option("--a", f_a, "order a > 0")->required();
    transform_cmd->add_option("input,--input", f_in, "f as CSV")->required();
    transform_cmd->add_option("--decay", f_decay, "decay class of f");
    transform_cmd->add_option("--tau", f_tau, "start:step:stop or comma list");

    // inverse
    auto* inverse_cmd = app.add_subcommand("inverse", "inverse transform from tau samples");
    double i_a = 0;
    std::string i_in;
    inverse_cmd->add_option("--a", i_a, "order a > 0")->required();
    inverse_cmd->add_option("input,--input", i_in, "transform as CSV tau,re,im,rho")->required();

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve f + f *_a theta = h");
    std::string s_spec, s_report;
    bool s_nystrom = false;
    solve_cmd->add_option("--spec", s_spec, "equation spec JSON")->required();
    solve_cmd->add_option("--report", s_report, "write the solvability report JSON here");
    solve_cmd->add_flag("--nystrom", s_nystrom, "also solve by Nystrom discretization and report the discrepancy");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "check an identity over a parameter grid");
    std::string v_id;
    std::map<std::string, std::string> v_params;
    bool v_list = false;
    verify_cmd->add_option("identity", v_id, "identity name");
    verify_cmd->add_flag("--list", v_list, "list identities");
    for (const char* p : {"alpha", "tau", "x", "y", "a", "p", "q", "beta"})
        verify_cmd->add_option(std::string("--") + p, v_params[p], "comma list of values");
    verify_cmd->footer(registry_help());

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) apply_config(cfg, parse_json(read_file(config_path), config_path), config_path);
        if (!tol_flag.empty()) cfg.quad.rel_tol = parse_double(tol_flag, "--tol");
        if (!grid_flag.empty()) cfg.grid = parse_grid(grid_flag, cfg.grid);
        if (!format_flag.empty()) cfg.format = format_flag;
        if (verbosity >= 0) cfg.verbosity = verbosity;
        try {
            cfg.quad.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (cfg.format != "csv" && cfg.format != "json") throw UsageError("format must be csv or json");
        if (show_config) {
            std::cout << to_json(cfg).dump(2) << '\n';
            return 0;
        }
        if (app.get_subcommands().empty()) {
            std::cout << app.help();
            return 2;
        }
        const QuadratureConfig& q = cfg.quad;
        auto grid_or = [&](const std::vector<double>& fallback) {
            return grid_flag.empty() && config_path.empty() ? fallback : cfg.grid.make();
        };

        if (eval->parsed()) {
            std::map<std::string, const std::string*> given{
                {"a", &e_a}, {"b", &e_b}, {"alpha", &e_alpha}, {"nu", &e_nu}, {"mu", &e_mu}};
            std::map<std::string, std::vector<std::string>> need{
                {"gamma", {}}, {"psi", {"a", "b"}}, {"whittaker_w", {"alpha", "nu"}}, {"parabolic_d", {"mu"}}, {"bessel_k", {"nu"}}};
            if (!need.count(fn)) throw UsageError("eval: unknown function '" + fn + "'");
            for (const auto& [k, v] : given) {
                const bool wanted = std::find(need[fn].begin(), need[fn].end(), k) != need[fn].end();
                if (wanted && v->empty()) throw UsageError("eval " + fn + ": missing --" + k);
                if (!wanted && !v->empty()) throw UsageError("eval " + fn + ": unexpected --" + k);
            }
            Sink out(output);
            json rows = json::array();
            if (cfg.format == "csv") *out.data << "x,re,im\n";
            for (const auto& s : e_args) {
                const double x = parse_double(s, "argument");
                cplx v;
                if (fn == "gamma") v = cgamma(x);
                else if (fn == "psi") v = kummer_psi(parse_complex(e_a, "--a"), parse_complex(e_b, "--b"), x).value;
                else if (fn == "whittaker_w")
                    v = whittaker_w(parse_complex(e_alpha, "--alpha"), parse_complex(e_nu, "--nu"), x).value;
                else if (fn == "parabolic_d") v = parabolic_d(parse_complex(e_mu, "--mu"), x).value;
                else v = bessel_k(parse_complex(e_nu, "--nu"), x).value;
                if (cfg.format == "csv")
                    *out.data << format_double(x) << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
                else
                    rows.push_back({{"x", x}, {"re", v.real()}, {"im", v.imag()}});
            }
            if (cfg.format == "json") *out.data << rows.dump(2) << '\n';
            return 0;
        }

        if (kernel->parsed()) {
            if (k_a.empty() == k_alpha.empty()) throw UsageError("kernel: give exactly one of --a and --alpha");
            const auto xs = parse_list(k_x, "--x"), ys = parse_list(k_y, "--y"), xis = parse_list(k_xi, "--xi");
            Sink out(output);
            if (!k_a.empty()) {
                const double a = parse_double(k_a, "--a");
                *out.data << "x,y,xi,q_value\n";
                for (double x : xs)
                    for (double y : ys)
                        for (double xi : xis)
                            *out.data << format_double(x) << ',' << format_double(y) << ',' << format_double(xi) << ','
                                      << format_double(kernel_q(a, x, y, xi)) << '\n';
            } else {
                const cplx al = parse_complex(k_alpha, "--alpha");
                *out.data << "x,y,xi,k_re,k_im\n";
                for (double x : xs)
                    for (double y : ys)
                        for (double xi : xis) {
                            const cplx k = kernel_k(al, x, y, xi);
                            *out.data << format_double(x) << ',' << format_double(y) << ',' << format_double(xi) << ','
                                      << format_double(k.real()) << ',' << format_double(k.imag()) << '\n';
                        }
            }
            return 0;
        }

        if (translate_cmd->parsed()) {
            const auto f = load_grid_function(t_in, resolve_decay(t_in, t_decay));
            const auto r = translate(f, t_a, t_y, grid_or(f.nodes()), q);
            Sink out(output);
            write_grid_function(*out.data, r);
            write_decay_sidecar(output, r.decay());
            return 0;
        }

        if (convolve_cmd->parsed()) {
            const auto f = load_grid_function(c_f, resolve_decay(c_f, c_df));
            const auto g = load_grid_function(c_g, resolve_decay(c_g, c_dg));
            const auto r = convolve(f, g, c_a, grid_or(f.nodes()), q);
            Sink out(output);
            write_grid_function(*out.data, r);
            write_decay_sidecar(output, r.decay());
            *out.summary << "sup " << format_double(norm_p(r, c_a, INFINITY, q)) << '\n';
            return 0;
        }

        if (transform_cmd->parsed()) {
            const auto f = load_grid_function(f_in, resolve_decay(f_in, f_decay));
            const auto taus = parse_range(f_tau, "--tau");
            const auto r = forward(f, f_a, taus, q);
            Sink out(output);
            write_transform(*out.data, r);
            *out.summary << "max_error " << format_double(r.max_error) << '\n';
            return 0;
        }

        if (inverse_cmd->parsed()) {
            std::ifstream in(i_in);
            if (!in) throw UsageError("cannot open '" + i_in + "'");
            const auto t = read_transform(in, i_a, i_in);
            const auto r = inverse(t, cfg.grid.make(), q);
            Sink out(output);
            write_grid_function(*out.data, r);
            write_decay_sidecar(output, r.decay());
            return 0;
        }

        if (solve_cmd->parsed()) {
            std::optional<GridSpec> g;
            const EquationSpec spec = load_equation(s_spec, g, cfg.grid);
            try {
                spec.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            const auto nodes = grid_flag.empty() && g ? g->make() : cfg.grid.make();
            const auto sol = solve(spec, nodes, q);
            json rep = {{"min_abs", sol.report.min_abs},
                        {"argmin_tau", {sol.report.argmin_tau.real(), sol.report.argmin_tau.imag()}},
                        {"limit_value", sol.report.limit_value.real()},
                        {"solvable", sol.report.solvable},
                        {"residual_sup", sol.residual_sup},
                        {"h_sup", sol.h_sup},
                        {"relative_residual", sol.h_sup > 0 ? sol.residual_sup / sol.h_sup : 0.0}};
            if (s_nystrom) {
                const auto ny = nystrom_solve(spec, nodes, q);
                double d = 0, m = 0;
                for (std::size_t i = 0; i < nodes.size(); ++i) {
                    d = std::max(d, std::abs(ny.values()[i] - sol.f.values()[i]));
                    m = std::max(m, std::abs(sol.f.values()[i]));
                }
                rep["nystrom_discrepancy"] = m > 0 ? d / m : d;
            }
            Sink out(output);
            write_grid_function(*out.data, sol.f);
            write_decay_sidecar(output, sol.f.decay());
            if (!s_report.empty()) {
                std::ofstream r(s_report, std::ios::binary);
                if (!r) throw UsageError("cannot write '" + s_report + "'");
                r << rep.dump(2) << '\n';
            }
            *out.summary << rep.dump(2) << '\n';
            return 0;
        }

        if (verify_cmd->parsed()) {
            if (v_list) {
                std::cout << registry_help();
                return 0;
            }
            if (v_id.empty()) throw UsageError("verify: identity name required (see --list)");
            const Identity* id = nullptr;
            try {
                id = &find_identity(v_id);
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            std::map<std::string, std::vector<double>> ranges;
            for (const auto& [k, v] : v_params) {
                if (v.empty()) continue;
                if (!id->defaults.count(k)) throw UsageError("verify " + v_id + ": no parameter --" + k);
                ranges[k] = parse_list(v, "--" + k);
            }
            const auto r = run_identity(*id, ranges, q);
            Sink out(output);
            *out.data << report_json(r).dump(2) << '\n';
            return r.pass ? 0 : 1;
        }
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NotSolvable& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const NonFiniteIntegrand& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
