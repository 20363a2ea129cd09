#include "expderiv/cli.hpp"

#include "expderiv/error.hpp"
#include "expderiv/format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

namespace expderiv::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

int parse_int(std::string_view s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw UsageError("not an integer: '" + std::string(s) + "'");
    return v;
}

double parse_point(std::string_view s) {
    bool negate = false;
    std::string_view body = s;
    if (!body.empty() && body.front() == '-') {
        negate = true;
        body.remove_prefix(1);
    }
    double v = 0.0;
    if (body == "ln2") {
        v = std::numbers::ln2;
    } else if (body == "pi") {
        v = std::numbers::pi;
    } else {
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw UsageError("not a number: '" + std::string(s) + "'");
        return v;
    }
    return negate ? -v : v;
}

template <class T>
void require_increasing(const std::vector<T>& v, const char* what) {
    if (v.empty())
        throw UsageError(std::string(what) + " list is empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i]))
            throw UsageError(std::string(what) + " list must be strictly increasing");
}

ordered_json json_number(double v) {
    if (!std::isfinite(v))
        return nullptr;
    return v;
}

long max_terms_from_env() {
    const char* env = std::getenv("EXPDERIV_MAX_TERMS");
    if (env == nullptr || *env == '\0')
        return 10'000'000;
    long v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 1)
        throw UsageError("EXPDERIV_MAX_TERMS must be a positive integer, got '" + std::string(s) + "'");
    return v;
}

// ---- evaluation -----------------------------------------------------------

EvalResult evaluate(Method method, int n, double x, const StirlingTriangle& triangle, const RunConfig& cfg) {
    const SeriesPolicy series{cfg.rel_tol, cfg.max_terms};
    const QuadPolicy quad{cfg.abs_tol, QuadPolicy{}.max_panels};
    switch (method) {
    case Method::ClosedForm1: return deriv_eq1(n, x, triangle);
    case Method::ClosedForm2: return deriv_eq2(n, x, triangle);
    case Method::Series: return deriv_series(n, x, series);
    case Method::Quadrature: return deriv_quadrature(n, x, quad);
    case Method::SmallXSeries: {
        // regularized series plus the pole term gives the full derivative
        if (x == 0.0)
            throw Error(ErrorKind::Pole, "smallx: x = 0 is a pole of 1/(e^x-1)");
        EvalResult r = reg_deriv_smallx(n, x);
        const long double pole = ((n % 2 == 0) ? 1.0L : -1.0L) * factorial(n).to_long_double() /
                                 std::pow(static_cast<long double>(x), n + 1);
        r.value = static_cast<double>(pole + r.value);
        return r;
    }
    case Method::FiniteDifference: {
        const double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (n + 2)) * std::max(1.0, std::fabs(x));
        const double d1 = finite_difference_oracle(n, x, h);
        double err = 0.0;
        if (n > 0) {
            const double d2 = finite_difference_oracle(n, x, 2.0 * h);
            err = std::fabs(d2 - d1) / 3.0;
        }
        return {n, x, d1, Method::FiniteDifference, err};
    }
    }
    throw UsageError("unknown method");
}

std::vector<EvalResult> evaluate_grid(const RunConfig& cfg) {
    int top = 0;
    for (int n : cfg.orders)
        top = std::max(top, n);
    if (top > kMaxFloatOrder)
        throw Error(ErrorKind::UnsupportedOrder,
                    "order " + std::to_string(top) + " exceeds the binary64 cap " + std::to_string(kMaxFloatOrder));
    const StirlingTriangle triangle(top + 1);
    std::vector<EvalResult> rows;
    for (int n : cfg.orders)
        for (double x : cfg.points)
            for (Method m : cfg.methods)
                rows.push_back(evaluate(m, n, x, triangle, cfg));
    return rows;
}

void write_eval(const std::vector<EvalResult>& rows, const RunConfig& cfg, std::ostream& out, const char* command) {
    switch (cfg.format) {
    case Format::Json: {
        ordered_json doc;
        doc["schema"] = kSchemaVersion;
        doc["command"] = command;
        doc["records"] = ordered_json::array();
        for (const auto& r : rows)
            doc["records"].push_back({{"n", r.order},
                                      {"x", json_number(r.point)},
                                      {"method", std::string(to_string(r.method))},
                                      {"value", json_number(r.value)},
                                      {"err_estimate", json_number(r.err_estimate)}});
        out << doc.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        out << "n,x,method,value,err_estimate\n";
        for (const auto& r : rows)
            out << r.order << ',' << format_double(r.point) << ',' << to_string(r.method) << ','
                << format_double(r.value) << ',' << format_double(r.err_estimate) << '\n';
        break;
    case Format::Plain:
        for (const auto& r : rows)
            out << to_string(r.method) << " n=" << r.order << " x=" << format_double(r.point)
                << " value=" << format_double(r.value) << " err=" << format_double(r.err_estimate) << '\n';
        break;
    }
}

// ---- verify ---------------------------------------------------------------

struct Worst {
    std::string label;
    double defect = 0.0;
    double tolerance = 0.0;
    double ratio = -1.0;
};

void consider(Worst& w, std::string label, double defect, double tol) {
    const double ratio = tol > 0.0 ? defect / tol : (defect > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    if (ratio > w.ratio) {
        w = {std::move(label), defect, tol, ratio};
    }
}

void write_verify(const VerifyReport& report, Format format, std::ostream& out) {
    Worst worst;
    for (const auto& c : report.certificates)
        consider(worst, std::string(to_string(c.identity)) + "(" + std::to_string(c.parameter) + ")", c.rel_defect,
                 c.tolerance);
    for (const auto& c : report.comparisons)
        consider(worst, c.check + "(n=" + std::to_string(c.n) + (c.x ? ",x=" + format_double(*c.x) : "") + ")",
                 c.defect, c.tolerance);

    if (format == Format::Plain) {
        for (const auto& c : report.certificates)
            out << (c.passed ? "PASS " : "FAIL ") << to_string(c.identity) << " param=" << c.parameter
                << " lhs=" << c.lhs << " rhs=" << format_double(c.rhs) << " defect=" << format_double(c.rel_defect)
                << (c.absolute ? " (abs)" : " (rel)") << " tol=" << format_double(c.tolerance) << '\n';
        for (const auto& c : report.comparisons)
            out << (c.passed ? "PASS " : "FAIL ") << c.check << " n=" << c.n
                << (c.x ? " x=" + format_double(*c.x) : std::string()) << ' ' << c.lhs_method << " vs "
                << c.rhs_method << " defect=" << format_double(c.defect) << (c.absolute ? " (abs)" : " (rel)")
                << " tol=" << format_double(c.tolerance) << '\n';
        out << "suite=" << report.suite << " total=" << report.total() << " passed=" << report.passed()
            << " failed=" << report.failed() << " worst=" << worst.label << " defect=" << format_double(worst.defect)
            << '\n';
        return;
    }

    ordered_json doc;
    doc["schema"] = kSchemaVersion;
    doc["command"] = "verify";
    doc["suite"] = report.suite;
    doc["certificates"] = ordered_json::array();
    for (const auto& c : report.certificates)
        doc["certificates"].push_back({{"identity", std::string(to_string(c.identity))},
                                       {"parameter", c.parameter},
                                       {"lhs", c.lhs},
                                       {"lhs_value", json_number(c.lhs_value)},
                                       {"rhs", json_number(c.rhs)},
                                       {"rel_defect", json_number(c.rel_defect)},
                                       {"defect_kind", c.absolute ? "absolute" : "relative"},
                                       {"tolerance", c.tolerance},
                                       {"sign_agrees", c.sign_agrees},
                                       {"passed", c.passed}});
    doc["comparisons"] = ordered_json::array();
    for (const auto& c : report.comparisons)
        doc["comparisons"].push_back({{"check", c.check},
                                      {"n", c.n},
                                      {"x", c.x ? json_number(*c.x) : ordered_json(nullptr)},
                                      {"lhs_method", c.lhs_method},
                                      {"rhs_method", c.rhs_method},
                                      {"defect", json_number(c.defect)},
                                      {"defect_kind", c.absolute ? "absolute" : "relative"},
                                      {"tolerance", c.tolerance},
                                      {"passed", c.passed}});
    doc["summary"] = {{"total", report.total()}, {"passed", report.passed()}, {"failed", report.failed()}};
    doc["worst"] = {{"check", worst.label},
                    {"defect", json_number(worst.defect)},
                    {"tolerance", worst.tolerance}};
    out << doc.dump(2) << '\n';
}

// ---- exact tables ---------------------------------------------------------

void write_stirling(int max_n, Format format, std::ostream& out) {
    const StirlingTriangle t(max_n);
    switch (format) {
    case Format::Json: {
        ordered_json doc;
        doc["schema"] = kSchemaVersion;
        doc["command"] = "stirling";
        doc["max_n"] = max_n;
        doc["rows"] = ordered_json::array();
        for (int m = 0; m <= max_n; ++m) {
            ordered_json row = ordered_json::array();
            for (const auto& v : t.row(m))
                row.push_back(v.to_string());
            doc["rows"].push_back(std::move(row));
        }
        out << doc.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        out << "n,k,value\n";
        for (int m = 0; m <= max_n; ++m)
            for (int k = 0; k <= m; ++k)
                out << m << ',' << k << ',' << t.at(m, k).to_string() << '\n';
        break;
    case Format::Plain:
        for (int m = 0; m <= max_n; ++m) {
            out << m << ':';
            for (const auto& v : t.row(m))
                out << ' ' << v.to_string();
            out << '\n';
        }
        break;
    }
}

void write_bernoulli(int max_n, Format format, std::ostream& out) {
    const auto b = bernoulli_table(max_n);
    switch (format) {
    case Format::Json: {
        ordered_json doc;
        doc["schema"] = kSchemaVersion;
        doc["command"] = "bernoulli";
        ordered_json values = ordered_json::object();
        for (int n = 0; n <= max_n; ++n)
            values["B_" + std::to_string(n)] = b[static_cast<std::size_t>(n)].to_string();
        doc["values"] = std::move(values);
        out << doc.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        out << "n,value\n";
        for (int n = 0; n <= max_n; ++n)
            out << n << ',' << b[static_cast<std::size_t>(n)].to_string() << '\n';
        break;
    case Format::Plain:
        for (int n = 0; n <= max_n; ++n)
            out << "B_" << n << " = " << b[static_cast<std::size_t>(n)].to_string() << '\n';
        break;
    }
}

void write_omega(int n, const std::vector<double>& points, Format format, std::ostream& out) {
    const StirlingTriangle t(n);
    const GeometricPolynomial p = geometric_polynomial(n, t);
    switch (format) {
    case Format::Json: {
        ordered_json doc;
        doc["schema"] = kSchemaVersion;
        doc["command"] = "omega";
        doc["n"] = n;
        doc["coeffs"] = ordered_json::array();
        for (const auto& c : p.coeffs)
            doc["coeffs"].push_back(c.to_string());
        doc["values"] = ordered_json::array();
        for (double x : points)
            doc["values"].push_back({{"x", json_number(x)}, {"value", json_number(eval_geometric_polynomial(p, x))}});
        out << doc.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        out << "k,coeff\n";
        for (std::size_t k = 0; k < p.coeffs.size(); ++k)
            out << k << ',' << p.coeffs[k].to_string() << '\n';
        break;
    case Format::Plain:
        out << "omega_" << n << ':';
        for (const auto& c : p.coeffs)
            out << ' ' << c.to_string();
        out << '\n';
        for (double x : points)
            out << "omega_" << n << '(' << format_double(x) << ") = " << format_double(eval_geometric_polynomial(p, x))
                << '\n';
        break;
    }
}

Format parse_format(const std::string& s) {
    if (s == "json")
        return Format::Json;
    if (s == "csv")
        return Format::Csv;
    return Format::Plain;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
    switch (cfg.command) {
    case Command::Eval:
        write_eval(evaluate_grid(cfg), cfg, out, "eval");
        return kExitOk;
    case Command::Table:
        write_eval(evaluate_grid(cfg), cfg, out, "table");
        return kExitOk;
    case Command::Verify: {
        VerifyOptions o;
        o.max_n = cfg.max_n;
        o.max_m = cfg.max_m;
        o.orders = cfg.orders;
        o.points = cfg.points;
        o.series = SeriesPolicy{cfg.rel_tol, cfg.max_terms};
        o.quad = QuadPolicy{cfg.abs_tol, QuadPolicy{}.max_panels};
        const VerifyReport report = run_suite(cfg.suite, o);
        write_verify(report, cfg.format, out);
        return report.all_passed() ? kExitOk : kExitFailure;
    }
    case Command::Stirling:
        write_stirling(cfg.max_n, cfg.format, out);
        return kExitOk;
    case Command::Bernoulli:
        write_bernoulli(cfg.max_n, cfg.format, out);
        return kExitOk;
    case Command::Omega:
        write_omega(cfg.orders.front(), cfg.points, cfg.format, out);
        return kExitOk;
    }
    return kExitUsage;
}

} // namespace

std::vector<int> parse_orders(std::string_view spec) {
    std::vector<int> r;
    const auto dots = spec.find("..");
    if (dots != std::string_view::npos) {
        const int lo = parse_int(trim(spec.substr(0, dots)));
        const int hi = parse_int(trim(spec.substr(dots + 2)));
        if (hi < lo)
            throw UsageError("empty order range '" + std::string(spec) + "'");
        for (int n = lo; n <= hi; ++n)
            r.push_back(n);
    } else {
        for (auto part : split(spec, ','))
            r.push_back(parse_int(part));
    }
    require_increasing(r, "order");
    if (r.front() < 0)
        throw UsageError("orders must be >= 0");
    return r;
}

std::vector<double> parse_points(std::string_view spec) {
    std::vector<double> r;
    for (auto part : split(spec, ','))
        r.push_back(parse_point(part));
    for (double x : r)
        if (!std::isfinite(x))
            throw UsageError("points must be finite");
    require_increasing(r, "point");
    return r;
}

std::vector<Method> parse_methods(std::string_view spec) {
    std::vector<Method> r;
    for (auto part : split(spec, ',')) {
        const auto m = method_from_string(part);
        if (!m)
            throw UsageError("unknown method '" + std::string(part) + "' (eq1, eq2, series, quad, smallx, fd)");
        if (std::find(r.begin(), r.end(), *m) != r.end())
            throw UsageError("method '" + std::string(part) + "' listed twice");
        r.push_back(*m);
    }
    if (r.empty())
        throw UsageError("method list is empty");
    return r;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Higher derivatives of 1/(e^x - 1): evaluation, tables and identity checks", "expderiv"};
    app.require_subcommand(1);

    std::string order_spec, point_spec, method_spec = "eq1,eq2,series,quad", format = "json", output;
    std::string suite = "all";
    double rel_tol = 1e-15, abs_tol = 1e-13;
    int max_n = -1, max_m = 15;

    auto add_format = [&](CLI::App* sub, const std::string& fallback) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "csv", "plain"}))
            ->default_str(fallback);
        sub->add_option("-o,--output", output, "Write to this file instead of stdout");
    };
    auto add_tolerances = [&](CLI::App* sub) {
        sub->add_option("--rel-tol", rel_tol, "Series truncation tolerance (relative)");
        sub->add_option("--abs-tol", abs_tol, "Quadrature tolerance (absolute)");
    };

    CLI::App* eval = app.add_subcommand("eval", "Evaluate (d/dx)^n 1/(e^x-1) at one point by several methods");
    eval->add_option("-n,--order", order_spec, "Derivative order")->required();
    eval->add_option("-x,--point", point_spec, "Point (decimal, ln2 or pi)")->required();
    eval->add_option("--method", method_spec, "Comma list of eq1, eq2, series, quad, smallx, fd");
    add_tolerances(eval);
    add_format(eval, "json");

    CLI::App* table = app.add_subcommand("table", "Evaluate over a grid of orders and points");
    table->add_option("-n,--order", order_spec, "Orders: 3, 1..15 or 1,4,9")->required();
    table->add_option("-x,--point", point_spec, "Comma list of points")->required();
    table->add_option("--method", method_spec, "Comma list of methods");
    add_tolerances(table);
    add_format(table, "csv");

    CLI::App* verify = app.add_subcommand("verify", "Run identity and cross-method checks");
    verify->add_option("--suite", suite, "Suite name or 'all'");
    verify->add_option("--max-n", max_n, "Largest order for the exact suites");
    verify->add_option("--max-m", max_m, "Largest m for Euler's formula");
    verify->add_option("--n", order_spec, "Orders for the cross / quadrature / limit suites");
    verify->add_option("-x,--point", point_spec, "Points for the cross / quadrature / fourier suites");
    add_tolerances(verify);
    verify->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "plain"}));
    verify->add_option("-o,--output", output, "Write to this file instead of stdout");

    CLI::App* stirling = app.add_subcommand("stirling", "Print S(n,k) for n <= max-n");
    stirling->add_option("--max-n", max_n, "Largest n")->required();
    add_format(stirling, "json");

    CLI::App* bern = app.add_subcommand("bernoulli", "Print exact B_0 .. B_max-n");
    bern->add_option("--max-n", max_n, "Largest index")->required();
    add_format(bern, "json");

    CLI::App* omega = app.add_subcommand("omega", "Print the geometric polynomial omega_n");
    omega->add_option("-n,--order", order_spec, "Order")->required();
    omega->add_option("-x,--point", point_spec, "Optional evaluation points");
    add_format(omega, "json");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("expderiv");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store)
        argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    RunConfig cfg;
    try {
        cfg.format = parse_format(format);
        cfg.output = output;
        cfg.rel_tol = rel_tol;
        cfg.abs_tol = abs_tol;
        cfg.max_n = max_n;
        cfg.max_m = max_m;
        cfg.suite = suite;
        cfg.max_terms = max_terms_from_env();
        if (!(rel_tol > 0.0 && rel_tol < 1.0) || !(abs_tol > 0.0))
            throw UsageError("tolerances must be positive (and rel-tol < 1)");

        if (eval->parsed() || table->parsed()) {
            cfg.command = eval->parsed() ? Command::Eval : Command::Table;
            cfg.orders = parse_orders(order_spec);
            cfg.points = parse_points(point_spec);
            cfg.methods = parse_methods(method_spec);
            if (eval->parsed() && (cfg.orders.size() != 1 || cfg.points.size() != 1))
                throw UsageError("eval takes a single order and point; use table for grids");
            if (table->parsed() && table->get_option("--format")->count() == 0)
                cfg.format = Format::Csv;
        } else if (verify->parsed()) {
            cfg.command = Command::Verify;
            const auto& names = suite_names();
            if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
                throw UsageError("unknown suite '" + suite + "'");
            if (!order_spec.empty())
                cfg.orders = parse_orders(order_spec);
            if (!point_spec.empty())
                cfg.points = parse_points(point_spec);
            if (max_m < 0)
                throw UsageError("--max-m must be >= 0");
        } else if (stirling->parsed() || bern->parsed()) {
            cfg.command = stirling->parsed() ? Command::Stirling : Command::Bernoulli;
            if (max_n < 0)
                throw UsageError("--max-n must be >= 0");
        } else {
            cfg.command = Command::Omega;
            cfg.orders = parse_orders(order_spec);
            if (cfg.orders.size() != 1)
                throw UsageError("omega takes a single order");
            if (!point_spec.empty())
                cfg.points = parse_points(point_spec);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (cfg.output.empty())
            return dispatch(cfg, out);
        std::ostringstream buffer;
        const int status = dispatch(cfg, buffer);
        std::ofstream file(cfg.output, std::ios::binary);
        if (!file) {
            err << "error: cannot open '" << cfg.output << "' for writing\n";
            return kExitFailure;
        }
        file << buffer.str();
        return status;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace expderiv::cli
