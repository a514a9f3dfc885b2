#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <type_traits>
#include <vector>

#include "qbern/bernstein.hpp"
#include "qbern/combin.hpp"
#include "qbern/interp.hpp"
#include "qbern/qcore.hpp"
#include "qbern/series.hpp"
#include "qbern/verify.hpp"

namespace {

using json = nlohmann::json;
using namespace qbern;

enum class Domain { Exact, F64, Big };

struct RunConfig {
    Rational q{1, 2};
    Domain domain = Domain::F64;
    unsigned bigfloat_bits = 128;
    double rel_tol = 1e-9;
    std::uint64_t seed = 42;
    int trunc_order = 16;
    bool json_out = false;
};

Domain parse_domain(const std::string& text, unsigned& bits) {
    if (text == "exact") return Domain::Exact;
    if (text == "f64") return Domain::F64;
    if (text.rfind("bigfloat:", 0) == 0) {
        bits = static_cast<unsigned>(std::stoul(text.substr(9)));
        if (bits < 2) throw InvalidArgument("bigfloat precision must be at least 2 bits");
        return Domain::Big;
    }
    throw InvalidArgument("unknown domain \"" + text + "\" (expected exact|f64|bigfloat:<bits>)");
}

template <class Fn>
int with_domain(const RunConfig& cfg, Fn&& fn) {
    switch (cfg.domain) {
        case Domain::Exact: return fn(std::type_identity<Rational>{});
        case Domain::F64: return fn(std::type_identity<double>{});
        case Domain::Big:
            set_bigfloat_precision_bits(cfg.bigfloat_bits);
            return fn(std::type_identity<BigFloat>{});
    }
    return 2;
}

template <class T>
QContext<T> make_context(const RunConfig& cfg) {
    return QContext<T>(from_rational<T>(cfg.q), cfg.rel_tol);
}

std::string domain_name(const RunConfig& cfg) {
    switch (cfg.domain) {
        case Domain::Exact: return "exact";
        case Domain::F64: return "f64";
        case Domain::Big: return "bigfloat:" + std::to_string(cfg.bigfloat_bits);
    }
    return "f64";
}

MultiIndex to_multi_index(const std::vector<int>& v, const char* what) {
    if (v.empty()) throw InvalidArgument(std::string(what) + " must have at least one entry");
    for (int e : v)
        if (e < 0) throw InvalidArgument(std::string(what) + " entries must be nonnegative");
    return MultiIndex(v);
}

template <class T>
std::vector<T> parse_reals(const std::vector<std::string>& texts) {
    std::vector<T> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(from_rational<T>(Rational::parse(t)));
    return out;
}

void emit_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

// complex literal "a+bi" (also accepts "a", "bi", "i", "-i")
std::pair<Rational, Rational> parse_complex(std::string s) {
    std::erase(s, ' ');
    if (s.empty()) throw InvalidArgument("empty complex literal");
    auto parse_coeff = [](std::string text, bool imaginary) {
        if (imaginary) {
            if (text.empty() || text == "+") return Rational(1);
            if (text == "-") return Rational(-1);
        }
        return Rational::parse(text);
    };
    if (s.back() != 'i') return {Rational::parse(s), Rational(0)};
    s.pop_back();
    // split at the sign that separates the real part from the imaginary part
    for (size_t pos = s.size(); pos-- > 1;) {
        if ((s[pos] == '+' || s[pos] == '-') && s[pos - 1] != 'e' && s[pos - 1] != 'E') {
            return {Rational::parse(s.substr(0, pos)), parse_coeff(s.substr(pos), true)};
        }
    }
    return {Rational(0), parse_coeff(s, true)};
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

template <class T>
int run_eval(const RunConfig& cfg, const std::vector<int>& kv, const std::vector<int>& nv,
             const std::vector<std::string>& xv) {
    MultiIndex k = to_multi_index(kv, "-k");
    MultiIndex n = to_multi_index(nv, "-n");
    if (k.dim() != n.dim() || k.dim() != static_cast<int>(xv.size()))
        throw DimensionMismatch("eval: -k, -n and -x must have the same length");
    QContext<T> ctx = make_context<T>(cfg);
    std::vector<T> xs = parse_reals<T>(xv);
    QPoint<T> pt = QPoint<T>::from_x(xs, ctx);
    T value = q_bernstein(BernsteinSpec{k, n}, pt);

    auto str = [](const T& v) { return numeric_traits<T>::str(v); };
    if (cfg.json_out) {
        json u = json::array(), v = json::array();
        for (int i = 0; i < pt.dim(); ++i) {
            u.push_back(str(pt.u(i)));
            v.push_back(str(pt.v(i)));
        }
        json j{{"command", "eval"},       {"domain", domain_name(cfg)},
               {"q", cfg.q.str()},        {"k", kv},
               {"n", nv},                 {"value", str(value)},
               {"u", u},                  {"v", v}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::vector<std::string> header{"value"}, row{str(value)};
        for (int i = 0; i < pt.dim(); ++i) header.push_back("u_" + std::to_string(i + 1));
        for (int i = 0; i < pt.dim(); ++i) header.push_back("v_" + std::to_string(i + 1));
        for (int i = 0; i < pt.dim(); ++i) row.push_back(str(pt.u(i)));
        for (int i = 0; i < pt.dim(); ++i) row.push_back(str(pt.v(i)));
        emit_csv_row(std::cout, header);
        emit_csv_row(std::cout, row);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// approximate
// ---------------------------------------------------------------------------

template <class T>
TargetFunction<T> builtin_function(const std::string& name, int arity) {
    auto product = [](std::span<const Rational> x) {
        Rational p(1);
        for (const auto& xi : x) p *= xi;
        return p;
    };
    auto total = [](std::span<const Rational> x) {
        Rational s(0);
        for (const auto& xi : x) s += xi;
        return s;
    };
    if (name == "one")
        return {arity, [](std::span<const Rational>) { return numeric_traits<T>::from_long(1); }};
    if (name == "coord-product")
        return {arity, [product](std::span<const Rational> x) { return from_rational<T>(product(x)); }};
    if (name == "sum")
        return {arity, [total](std::span<const Rational> x) { return from_rational<T>(total(x)); }};
    if (name == "runge")
        return {arity, [](std::span<const Rational> x) {
                    Rational d(1);
                    for (const auto& xi : x) {
                        Rational y = Rational(2) * xi - Rational(1);
                        d += Rational(25) * y * y;
                    }
                    return from_rational<T>(Rational(1) / d);
                }};
    if (name == "exp-sum") {
        if constexpr (numeric_traits<T>::exact) {
            throw DomainUnsupported("exp-sum is not exactly representable; use a floating-point domain");
        } else {
            return {arity, [total](std::span<const Rational> x) {
                        using std::exp;
                        return exp(from_rational<T>(total(x)));
                    }};
        }
    }
    throw InvalidArgument("unknown builtin function \"" + name +
                          "\" (expected one|coord-product|sum|exp-sum|runge)");
}

template <class T>
int run_approximate(const RunConfig& cfg, const std::string& fname, const std::vector<int>& nv,
                    int grid) {
    MultiIndex n = to_multi_index(nv, "-n");
    if (grid < 2) throw InvalidArgument("approximate: grid must be at least 2");
    const int w = n.dim();
    TargetFunction<T> f = builtin_function<T>(fname, w);
    QContext<T> ctx = make_context<T>(cfg);

    auto str = [](const T& v) { return numeric_traits<T>::str(v); };
    json rows = json::array();
    std::vector<std::string> header;
    for (int i = 0; i < w; ++i) header.push_back("x_" + std::to_string(i + 1));
    header.insert(header.end(), {"f", "operator", "abs_error"});
    if (!cfg.json_out) emit_csv_row(std::cout, header);

    std::vector<int> idx(static_cast<size_t>(w), 0);
    MultiIndex top = to_multi_index(std::vector<int>(static_cast<size_t>(w), grid - 1), "grid");
    std::vector<Rational> node(static_cast<size_t>(w));
    do {
        std::vector<T> xs(static_cast<size_t>(w));
        for (int i = 0; i < w; ++i) {
            node[static_cast<size_t>(i)] = Rational(idx[static_cast<size_t>(i)], grid - 1);
            xs[static_cast<size_t>(i)] = from_rational<T>(node[static_cast<size_t>(i)]);
        }
        QPoint<T> pt = QPoint<T>::from_x(xs, ctx);
        T fx = f.eval(node);
        T op = q_bernstein_operator(f, n, pt);
        T err = numeric_traits<T>::abs(op - fx);
        if (cfg.json_out) {
            json xsj = json::array();
            for (const auto& x : xs) xsj.push_back(str(x));
            rows.push_back({{"x", xsj}, {"f", str(fx)}, {"operator", str(op)}, {"abs_error", str(err)}});
        } else {
            std::vector<std::string> row;
            for (const auto& x : xs) row.push_back(str(x));
            row.insert(row.end(), {str(fx), str(op), str(err)});
            emit_csv_row(std::cout, row);
        }
    } while (next_multi_index(idx, top));

    if (cfg.json_out) {
        json j{{"command", "approximate"}, {"domain", domain_name(cfg)}, {"q", cfg.q.str()},
               {"function", fname},        {"n", nv},                    {"grid", grid},
               {"rows", rows}};
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

int run_table(const RunConfig& cfg, const std::string& family, int nmax, int kmax) {
    if (nmax < 0 || kmax < 0) throw InvalidArgument("table: nmax and kmax must be nonnegative");
    QContext<Rational> ctx(cfg.q, cfg.rel_tol);

    const bool bernoulli = family == "bernoulli";
    std::vector<std::vector<Rational>> rows;
    if (family == "stirling" || family == "qstirling" || family == "gaussbinom") {
        for (int n = 0; n <= nmax; ++n) {
            std::vector<Rational> row;
            for (int k = 0; k <= kmax; ++k) {
                if (family == "stirling") row.push_back(stirling2(n, k));
                else if (family == "qstirling") row.push_back(q_stirling2(n, k, ctx));
                else row.push_back(gauss_binomial(n, k, ctx));
            }
            rows.push_back(std::move(row));
        }
    } else if (bernoulli) {
        for (int order = 0; order <= kmax; ++order) {
            BernoulliTable t = bernoulli_higher(nmax, order);
            rows.push_back(std::move(t.values));
        }
    } else {
        throw InvalidArgument("unknown table family \"" + family +
                              "\" (expected stirling|qstirling|bernoulli|gaussbinom)");
    }

    const char* row_label = bernoulli ? "order" : "n";
    const char* col_label = bernoulli ? "n=" : "k=";
    if (cfg.json_out) {
        json jrows = json::array();
        for (size_t r = 0; r < rows.size(); ++r) {
            json values = json::array();
            for (const auto& v : rows[r]) values.push_back(v.str());
            jrows.push_back({{row_label, r}, {"values", values}});
        }
        json j{{"command", "table"}, {"family", family}, {"q", cfg.q.str()},
               {"nmax", nmax},       {"kmax", kmax},     {"rows", jrows}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::vector<std::string> header{row_label};
        for (size_t c = 0; c < rows[0].size(); ++c)
            header.push_back(col_label + std::to_string(c));
        emit_csv_row(std::cout, header);
        for (size_t r = 0; r < rows.size(); ++r) {
            std::vector<std::string> cells{std::to_string(r)};
            for (const auto& v : rows[r]) cells.push_back(v.str());
            emit_csv_row(std::cout, cells);
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

template <class T>
int run_series(const RunConfig& cfg, int k, const std::string& xtext) {
    if (k < 0) throw InvalidArgument("series: -k must be nonnegative");
    if (cfg.trunc_order < k)
        throw InvalidArgument("series: --order must be at least k");
    QContext<T> ctx = make_context<T>(cfg);
    std::vector<T> xs{from_rational<T>(Rational::parse(xtext))};
    QPoint<T> pt = QPoint<T>::from_x(xs, ctx);
    EgfSeries<T> gf = bernstein_gf(k, pt.u(0), pt.v(0), cfg.trunc_order);

    auto str = [](const T& v) { return numeric_traits<T>::str(v); };
    json rows = json::array();
    if (!cfg.json_out) emit_csv_row(std::cout, {"n", "egf_coeff", "direct"});
    for (int n = 0; n <= cfg.trunc_order; ++n) {
        T coeff = coeff_extract(gf, n);
        T direct = q_bernstein(BernsteinSpec{MultiIndex{k}, MultiIndex{n}}, pt);
        if (cfg.json_out)
            rows.push_back({{"n", n}, {"egf_coeff", str(coeff)}, {"direct", str(direct)}});
        else
            emit_csv_row(std::cout, {std::to_string(n), str(coeff), str(direct)});
    }
    if (cfg.json_out) {
        json j{{"command", "series"}, {"domain", domain_name(cfg)}, {"q", cfg.q.str()},
               {"k", k},              {"order", cfg.trunc_order},   {"rows", rows}};
        std::cout << j.dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// interp
// ---------------------------------------------------------------------------

template <class T>
int run_interp(const RunConfig& cfg, const std::string& stext, const std::vector<int>& kv,
               const std::vector<std::string>& xv) {
    MultiIndex k = to_multi_index(kv, "-k");
    if (k.dim() != static_cast<int>(xv.size()))
        throw DimensionMismatch("interp: -k and -x must have the same length");
    auto [sre, sim] = parse_complex(stext);
    QContext<T> ctx = make_context<T>(cfg);
    std::vector<T> xs = parse_reals<T>(xv);
    const T one = numeric_traits<T>::from_long(1);
    for (const T& x : xs)
        if (x == one)
            throw PoleAtOne("interp: the interpolation function diverges at x_i = 1");
    QPoint<T> pt = QPoint<T>::from_x(xs, ctx);
    InterpSpec<T> spec{k, pt};

    T value_re, value_im;
    if constexpr (numeric_traits<T>::exact) {
        auto s_int = sre.as_long();
        if (!s_int || !sim.is_zero())
            throw DomainUnsupported("interp: exact domain supports integer s only");
        value_re = interp_q_int(*s_int, spec);
        value_im = Rational(0);
    } else {
        Complex<T> s{from_rational<T>(sre), from_rational<T>(sim)};
        Complex<T> value = interp_q(s, spec);
        value_re = value.re;
        value_im = value.im;
    }

    auto str = [](const T& v) { return numeric_traits<T>::str(v); };
    if (cfg.json_out) {
        json j{{"command", "interp"}, {"domain", domain_name(cfg)}, {"q", cfg.q.str()},
               {"s", stext},          {"k", kv},                    {"re", str(value_re)},
               {"im", str(value_im)}};
        std::cout << j.dump(2) << '\n';
    } else {
        emit_csv_row(std::cout, {"re", "im"});
        emit_csv_row(std::cout, {str(value_re), str(value_im)});
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int run_verify(const RunConfig& cfg, const std::string& suite_text, long cases, bool inject_fault) {
    verify::Suite suite = verify::parse_suite(suite_text);
    verify::Options opts;
    opts.seed = cfg.seed;
    opts.cases = cases;
    opts.rel_tol = cfg.rel_tol;
    opts.trunc_order = cfg.trunc_order;
    opts.inject_recurrence_fault = inject_fault;
    verify::Report report = verify::run(suite, opts);
    if (cfg.json_out)
        std::cout << verify::report_json(report, opts, suite) << '\n';
    else
        std::cout << verify::report_csv(report);
    return report.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"modified q-Bernstein polynomials of several variables: evaluation, operator "
                 "approximation, generating series, q-combinatorics tables, interpolation "
                 "function, and an identity verification suite"};
    app.fallthrough();

    RunConfig cfg;
    std::string q_text = "1/2";
    std::string domain_text = "f64";
    std::string out_text = "csv";
    app.add_option("-q,--q", q_text, "deformation parameter q in (0,1], \"p/r\" or decimal")
        ->capture_default_str();
    app.add_option("--domain", domain_text, "numeric domain: exact|f64|bigfloat:<bits>")
        ->capture_default_str();
    app.add_option("--tol", cfg.rel_tol, "relative tolerance for identity checks in float domains")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized verification cases")
        ->capture_default_str();
    app.add_option("--order", cfg.trunc_order, "truncation order for generating series")
        ->capture_default_str();
    app.add_option("--out", out_text, "output format: csv|json")->capture_default_str();

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a basis polynomial B_{k;n}(x;q)");
    std::vector<int> eval_k, eval_n;
    std::vector<std::string> eval_x;
    eval_cmd->add_option("-k", eval_k, "basis index, one entry per dimension")->required();
    eval_cmd->add_option("-n", eval_n, "basis degree, one entry per dimension")->required();
    eval_cmd->add_option("-x", eval_x, "evaluation point, entries in [0,1]")->required();

    auto* approx_cmd = app.add_subcommand("approximate", "tabulate the operator approximation of a builtin function");
    std::string approx_f = "one";
    std::vector<int> approx_n;
    int approx_grid = 5;
    approx_cmd->add_option("-f,--function", approx_f, "one|coord-product|sum|exp-sum|runge")
        ->capture_default_str();
    approx_cmd->add_option("-n", approx_n, "operator degree, one entry per dimension")->required();
    approx_cmd->add_option("-g,--grid", approx_grid, "grid points per axis (>= 2)")
        ->capture_default_str();

    auto* table_cmd = app.add_subcommand("table", "emit exact combinatorial number tables");
    std::string table_family = "stirling";
    int table_nmax = 8, table_kmax = 8;
    table_cmd->add_option("--family", table_family, "stirling|qstirling|bernoulli|gaussbinom")
        ->capture_default_str();
    table_cmd->add_option("--nmax", table_nmax, "largest n (or largest degree for bernoulli)")
        ->capture_default_str();
    table_cmd->add_option("--kmax", table_kmax, "largest k (or largest order for bernoulli)")
        ->capture_default_str();

    auto* verify_cmd = app.add_subcommand("verify", "machine-check the identity suite");
    std::string verify_suite = "all";
    long verify_cases = 50;
    bool inject_fault = false;
    verify_cmd->add_option("--suite", verify_suite, "all|bernstein|combin|series|interp")
        ->capture_default_str();
    verify_cmd->add_option("--cases", verify_cases, "random cases per identity")
        ->capture_default_str();
    verify_cmd->add_flag("--inject-fault", inject_fault)->group("");

    auto* series_cmd = app.add_subcommand("series", "generating-series coefficients next to direct evaluation");
    int series_k = 0;
    std::string series_x = "1/2";
    series_cmd->add_option("-k", series_k, "basis index")->capture_default_str();
    series_cmd->add_option("-x", series_x, "evaluation point in [0,1]")->capture_default_str();

    auto* interp_cmd = app.add_subcommand("interp", "evaluate the interpolation function D_q(s,k;x)");
    std::string interp_s = "0";
    std::vector<int> interp_k;
    std::vector<std::string> interp_x;
    interp_cmd->add_option("-s", interp_s, "complex argument \"a+bi\"")->capture_default_str();
    interp_cmd->add_option("-k", interp_k, "index vector")->required();
    interp_cmd->add_option("-x", interp_x, "evaluation point, entries in [0,1)")->required();

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cfg.q = Rational::parse(q_text);
        if (cfg.q.sign() <= 0 || cfg.q > Rational(1))
            throw InvalidArgument("q must lie in (0,1]");
        cfg.domain = parse_domain(domain_text, cfg.bigfloat_bits);
        if (out_text == "json") cfg.json_out = true;
        else if (out_text == "csv") cfg.json_out = false;
        else throw InvalidArgument("unknown output format \"" + out_text + "\" (expected csv|json)");
        if (cfg.rel_tol <= 0) throw InvalidArgument("--tol must be positive");
        if (cfg.trunc_order < 1) throw InvalidArgument("--order must be at least 1");

        if (eval_cmd->parsed())
            return with_domain(cfg, [&]<class T>(std::type_identity<T>) {
                return run_eval<T>(cfg, eval_k, eval_n, eval_x);
            });
        if (approx_cmd->parsed())
            return with_domain(cfg, [&]<class T>(std::type_identity<T>) {
                return run_approximate<T>(cfg, approx_f, approx_n, approx_grid);
            });
        if (table_cmd->parsed()) return run_table(cfg, table_family, table_nmax, table_kmax);
        if (verify_cmd->parsed()) return run_verify(cfg, verify_suite, verify_cases, inject_fault);
        if (series_cmd->parsed())
            return with_domain(cfg, [&]<class T>(std::type_identity<T>) {
                return run_series<T>(cfg, series_k, series_x);
            });
        if (interp_cmd->parsed())
            return with_domain(cfg, [&]<class T>(std::type_identity<T>) {
                return run_interp<T>(cfg, interp_s, interp_k, interp_x);
            });
    } catch (const IdentityViolation& e) {
        std::cerr << "identity violation: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
