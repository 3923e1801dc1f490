#include "primegap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "primegap/equidistribution.hpp"
#include "primegap/errors.hpp"
#include "primegap/hypothesis.hpp"
#include "primegap/irrational.hpp"
#include "primegap/parallel.hpp"
#include "primegap/sequences.hpp"
#include "primegap/sieve.hpp"
#include "primegap/smoothing.hpp"
#include "primegap/tuples.hpp"

namespace primegap::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

double fixed15(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

namespace {

constexpr const char* kDeskScaleNote =
    "desk-scale measurement: raw error sums, ratios and fitted log-log slopes stand in for the "
    "asymptotic normalizers, which are too forgiving to test at any reachable x";

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return fixed15(v);
}

std::string fmt(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

template <class T>
std::string fmt(T v)
    requires std::is_integral_v<T>
{
    return std::to_string(v);
}

struct Globals {
    int threads = 0;
    std::string out;
    bool csv = false;
    bool json_out = false;
    std::string prime_cache;
    unsigned precision_bits = kDefaultPrecisionBudget;
};

struct Report {
    json doc = json::object();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    bool csv_default = false;
};

struct SpecArgs {
    std::string alpha;
    std::string beta = "0";
    std::string c = "1";
};

void add_spec_options(CLI::App* sub, SpecArgs& s, bool required = true) {
    auto* opt = sub->add_option("--alpha", s.alpha, "irrational: surd:(a+b*sqrt(d))/e | pi | e | cf:[a0;a1,...,(p1,...)]");
    if (required) opt->required();
    sub->add_option("--beta", s.beta, "offset p/q")->capture_default_str();
    sub->add_option("--c", s.c, "cutoff p/q in (0, 1]")->capture_default_str();
}

BeattySpec make_spec(const SpecArgs& s, const Globals& g) {
    return BeattySpec(IrrationalSpec::parse(s.alpha, g.precision_bits), Rational::parse(s.beta),
                      Rational::parse(s.c));
}

json spec_params(const BeattySpec& spec) {
    return json{{"alpha", spec.alpha().str()}, {"beta", spec.beta().str()}, {"c", spec.c().str()}};
}

PrimeTable acquire_table(std::uint64_t limit, const Globals& g) {
    std::optional<fs::path> cache;
    if (!g.prime_cache.empty()) {
        cache = fs::path(g.prime_cache);
    } else if (const char* dir = std::getenv("PRIMEGAP_CACHE_DIR"); dir && *dir) {
        cache = fs::path(dir) / ("primes_" + std::to_string(limit) + ".pgl");
    }
    return PrimeTable::load_or_build(std::max<std::uint64_t>(limit, 2), cache);
}

// accepts plain integers and exact forms like 1e6
std::int64_t parse_count(const std::string& text) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: " + text);
    }
    if (pos != text.size() || !std::isfinite(v) || v != std::floor(v) || std::fabs(v) > 9.0e18)
        throw InvalidArgument("not an integer: " + text);
    return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> parse_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_count(item));
    return out;
}

json row_json(const ResidueRow& r) {
    return json{{"q", r.q}, {"phi_q", r.phi_q}, {"max_error", num(r.max_error)}, {"argmax_a", r.argmax_a}};
}

void residue_rows_csv(Report& rep, const std::vector<ResidueRow>& rows) {
    rep.header = {"q", "phi_q", "max_error", "argmax_a"};
    for (const auto& r : rows) rep.rows.push_back({fmt(r.q), fmt(r.phi_q), fmt(r.max_error), fmt(r.argmax_a)});
}

std::string join_primes(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
    return s;
}

json cluster_json(const ClusterReport& r) {
    json ex = json::array();
    for (const auto& e : r.exemplars) ex.push_back({{"n", e.anchor}, {"index", e.index}, {"primes", e.primes}});
    return ex;
}

void cluster_csv(Report& rep, const ClusterReport& r) {
    rep.header = {"n", "index", "primes"};
    for (const auto& e : r.exemplars) rep.rows.push_back({fmt(e.anchor), fmt(e.index), join_primes(e.primes)});
}

void window_rows(Report& rep, const SequenceWindow& w) {
    json rows = json::array();
    rep.header = {"n", "term", "frac_part"};
    for (const auto& e : w.entries) {
        rows.push_back({{"n", e.n}, {"term", e.term}, {"frac_part", num(e.frac)}});
        rep.rows.push_back({fmt(e.n), fmt(e.term), fmt(e.frac)});
    }
    rep.doc["rows"] = rows;
}

json fit_json(const LogLogFit& fit) {
    json res = json::array();
    for (const double r : fit.residuals) res.push_back(num(r));
    return json{{"slope", num(fit.slope)}, {"intercept", num(fit.intercept)}, {"residuals", res}};
}

void emit(const Report& rep, const Globals& g, std::ostream& out) {
    const bool csv = g.csv || (rep.csv_default && !g.json_out);
    std::ostringstream text;
    if (csv) {
        for (std::size_t i = 0; i < rep.header.size(); ++i) text << (i ? "," : "") << rep.header[i];
        text << '\n';
        for (const auto& row : rep.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) text << (i ? "," : "") << row[i];
            text << '\n';
        }
    } else {
        text << rep.doc.dump(2) << '\n';
    }
    if (g.out.empty()) {
        out << text.str();
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw IoError("cannot open " + g.out);
    f << text.str();
    if (!f) throw IoError("write failed for " + g.out);
}

// ---------------------------------------------------------------------------
// subcommands

struct CfArgs {
    std::string alpha;
    std::size_t terms = 20;
    std::size_t depth = 30;
};

Report run_cf(const CfArgs& a, const Globals& g) {
    const auto spec = IrrationalSpec::parse(a.alpha, g.precision_bits);
    const auto conv = convergents(spec, a.terms);
    const auto type = estimate_type(spec, a.depth);
    Report rep;
    rep.doc["command"] = "cf";
    rep.doc["params"] = {{"alpha", spec.str()}, {"terms", a.terms}, {"type_depth", a.depth},
                         {"precision_bits", g.precision_bits}};
    json rows = json::array();
    rep.header = {"k", "a", "p", "q"};
    for (const auto& c : conv) {
        rows.push_back({{"k", c.index}, {"a", c.a.get_str()}, {"p", c.p.get_str()}, {"q", c.q.get_str()}});
        rep.rows.push_back({fmt(c.index), c.a.get_str(), c.p.get_str(), c.q.get_str()});
    }
    rep.doc["rows"] = rows;
    rep.doc["totals"] = {{"tau_hat", num(type.tau_hat)}, {"prefix_max", num(type.prefix_max)},
                         {"tail_start", type.tail_start}};
    return rep;
}

struct BeattyArgs {
    SpecArgs spec;
    std::string lo = "1";
    std::string hi;
    std::vector<std::string> members;
};

Report run_beatty(const BeattyArgs& a, const Globals& g) {
    const auto spec = make_spec(a.spec, g);
    const auto lo = parse_count(a.lo), hi = parse_count(a.hi);
    Report rep;
    rep.doc["command"] = "beatty";
    rep.doc["params"] = spec_params(spec);
    rep.doc["params"]["lo"] = lo;
    rep.doc["params"]["hi"] = hi;
    rep.doc["params"]["precision_bits"] = g.precision_bits;
    const auto w = beatty_window(spec, lo, hi);
    window_rows(rep, w);
    rep.doc["totals"] = {{"count", w.size()}, {"density", num(spec.density())}};
    if (!a.members.empty()) {
        json m = json::array();
        for (const auto& s : a.members) {
            const auto v = parse_count(s);
            const auto r = beatty_membership(spec, v);
            m.push_back({{"m", v}, {"member", r.member}, {"witness", r.witness ? json(*r.witness) : json(nullptr)}});
        }
        rep.doc["membership"] = m;
    }
    return rep;
}

struct LeitmannArgs {
    std::string f;
    std::optional<std::string> lo;
    std::string hi;
    bool validate = false;
};

std::vector<double> validation_grid(const LeitmannFunction& f) {
    std::vector<double> grid;
    const double start = std::max(10.0, static_cast<double>(f.c0()) * 2.0);
    for (double x = start; x <= 1e12; x *= 10.0) grid.push_back(x);
    return grid;
}

Report run_leitmann(const LeitmannArgs& a, const Globals&) {
    const auto f = LeitmannFunction::parse(a.f);
    const auto lo = a.lo ? parse_count(*a.lo) : leitmann_term(f, f.c0());
    const auto hi = parse_count(a.hi);
    Report rep;
    rep.doc["command"] = "leitmann";
    rep.doc["params"] = {{"f", f.str()}, {"c0", f.c0()}, {"lo", lo}, {"hi", hi}};
    const auto w = leitmann_window(f, lo, hi);
    window_rows(rep, w);
    rep.doc["totals"] = {{"count", w.size()}};
    if (a.validate) {
        const auto v = leitmann_validate(f, validation_grid(f), true);
        json dev = json::array();
        for (const double d : v.final_deviation) dev.push_back(num(d));
        rep.doc["validation"] = {{"ok", v.ok()},
                                 {"violations", v.violations},
                                 {"final_deviation", dev},
                                 {"st_non_increasing", v.st_non_increasing}};
    }
    return rep;
}

struct DiscrepancyArgs {
    SpecArgs spec;
    std::string f;
    std::vector<std::string> n;
    std::vector<std::uint64_t> q{1};
    std::int64_t et_m_max = 256;
    double epsilon = 0.05;
};

Report run_discrepancy(const DiscrepancyArgs& a, const Globals& g) {
    if (a.spec.alpha.empty() == a.f.empty()) throw InvalidArgument("give exactly one of --alpha and --f");
    DiscrepancyOptions opt;
    opt.et_m_max = a.et_m_max;
    opt.epsilon = a.epsilon;
    Report rep;
    rep.csv_default = true;
    rep.doc["command"] = "discrepancy";
    std::optional<IrrationalSpec> alpha;
    std::optional<LeitmannFunction> f;
    if (!a.spec.alpha.empty()) {
        alpha = IrrationalSpec::parse(a.spec.alpha, g.precision_bits);
        rep.doc["params"] = {{"alpha", alpha->str()}};
    } else {
        f = LeitmannFunction::parse(a.f);
        rep.doc["params"] = {{"f", f->str()}, {"c0", f->c0()}};
    }
    rep.doc["params"]["et_m_max"] = a.et_m_max;
    rep.doc["params"]["epsilon"] = num(a.epsilon);
    rep.doc["params"]["precision_bits"] = g.precision_bits;
    rep.header = {"N", "q", "d_star", "d_extreme", "et_bound", "et_m", "envelope"};
    json rows = json::array();
    std::vector<double> xs, ys, ratios;
    for (const auto& ns : a.n) {
        const auto N = parse_count(ns);
        if (N < 1) throw InvalidArgument("N must be positive");
        for (const auto q : a.q) {
            const auto r = alpha ? scaled_beatty_discrepancy(*alpha, q, static_cast<std::uint64_t>(N), opt)
                                 : leitmann_discrepancy(*f, q, static_cast<std::uint64_t>(N), opt);
            rows.push_back({{"N", r.N},
                            {"q", r.q},
                            {"d_star", num(r.d_star)},
                            {"d_extreme", num(r.d_extreme)},
                            {"et_bound", num(r.et_bound)},
                            {"et_m", r.et_m},
                            {"envelope", num(r.envelope)},
                            {"q_too_large", r.q_too_large}});
            rep.rows.push_back({fmt(r.N), fmt(r.q), fmt(r.d_star), fmt(r.d_extreme), fmt(r.et_bound), fmt(r.et_m),
                                fmt(r.envelope)});
            xs.push_back(static_cast<double>(r.N) / static_cast<double>(r.q));
            ys.push_back(r.d_extreme);
            ratios.push_back(r.d_extreme / r.envelope);
        }
    }
    rep.doc["rows"] = rows;
    const auto [lo_it, hi_it] = std::minmax_element(ratios.begin(), ratios.end());
    rep.doc["totals"] = {{"c_fit", num(*hi_it)}, {"ratio_spread", num(*hi_it / *lo_it)}};
    if (xs.size() >= 3 && std::adjacent_find(xs.begin(), xs.end(), std::not_equal_to<>()) != xs.end())
        rep.doc["slopes"] = {{"d_extreme_vs_N_over_q", fit_json(fit_loglog(xs, ys))}};
    return rep;
}

struct PsiArgs {
    double gamma = 0.5;
    double delta = 0.1;
    std::int64_t K = 64;
};

Report run_psi_delta(const PsiArgs& a, const Globals&) {
    const auto p = PsiDelta::make(a.gamma, a.delta);
    if (a.K < 1) throw InvalidArgument("K must be positive");
    Report rep;
    rep.csv_default = true;
    rep.doc["command"] = "psi-delta";
    rep.doc["params"] = {{"gamma", num(p.gamma)}, {"delta", num(p.delta)}, {"K", a.K}};
    rep.header = {"k", "re_g", "im_g", "bound"};
    json rows = json::array();
    for (std::int64_t k = 1; k <= a.K; ++k) {
        const auto g = psi_delta_fourier(p, k).g;
        const double b = psi_delta_coefficient_bound(p, k);
        rows.push_back({{"k", k}, {"re_g", num(g.real())}, {"im_g", num(g.imag())}, {"bound", num(b)}});
        rep.rows.push_back({fmt(k), fmt(g.real()), fmt(g.imag()), fmt(b)});
    }
    rep.doc["rows"] = rows;
    rep.doc["totals"] = {{"tail_bound", num(4.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(a.K) * p.delta))}};
    return rep;
}

struct AdmissibleArgs {
    SpecArgs spec;
    std::size_t k = 0;
    std::int64_t search_limit = 10000;
    std::string shifts;
};

Report run_admissible(const AdmissibleArgs& a, const Globals& g) {
    Report rep;
    rep.doc["command"] = "admissible";
    if (!a.shifts.empty()) {
        const LinearFormTuple t(parse_list(a.shifts));
        const auto adm = is_admissible(t);
        rep.doc["params"] = {{"shifts", t.shifts()}};
        rep.doc["shifts"] = t.shifts();
        rep.doc["admissible"] = adm.admissible;
        rep.doc["witness_prime"] = adm.witness_prime ? json(*adm.witness_prime) : json(nullptr);
        rep.doc["diameter"] = diameter(t);
        return rep;
    }
    if (a.spec.alpha.empty()) throw InvalidArgument("--alpha is required unless --shifts is given");
    if (a.k == 0) throw InvalidArgument("--k is required unless --shifts is given");
    const auto spec = make_spec(a.spec, g);
    const auto t = beatty_admissible_tuple(spec, a.k, a.search_limit);
    rep.doc["params"] = spec_params(spec);
    rep.doc["params"]["k"] = a.k;
    rep.doc["params"]["search_limit"] = a.search_limit;
    rep.doc["shifts"] = t.shifts();
    rep.doc["W"] = t.origin()->W;
    rep.doc["residue_class"] = t.origin()->residue;
    rep.doc["diameter"] = diameter(t);
    rep.doc["admissible"] = is_admissible(t).admissible;
    return rep;
}

struct HypArgs {
    SpecArgs spec;
    int part = 1;
    std::string x;
    std::optional<double> theta;
    std::int64_t shift = 0;
};

Report run_hyp(const HypArgs& a, const Globals& g) {
    const auto spec = make_spec(a.spec, g);
    const auto x = parse_count(a.x);
    Report rep;
    rep.doc["command"] = "hyp-check";
    rep.doc["note"] = kDeskScaleNote;
    rep.doc["params"] = spec_params(spec);
    rep.doc["params"]["part"] = a.part;
    rep.doc["params"]["x"] = x;
    rep.doc["params"]["precision_bits"] = g.precision_bits;
    if (a.part == 3) {
        const double theta = a.theta.value_or(default_theta(spec));
        rep.doc["params"]["theta"] = num(theta);
        const auto c = hyp1_part3(spec, x, theta);
        rep.doc["params"]["q_max"] = c.q_max;
        rep.doc["rows"] = json::array();
        rep.doc["totals"] = {{"ratio", num(c.ratio)}, {"q", c.q}, {"a", c.a}, {"count_a", c.count_a}};
        rep.header = {"x", "theta", "q_max", "ratio", "q", "a"};
        rep.rows.push_back({fmt(x), fmt(theta), fmt(c.q_max), fmt(c.ratio), fmt(c.q), fmt(c.a)});
        return rep;
    }
    HypothesisReport h;
    if (a.part == 1) {
        const double theta = a.theta.value_or(default_theta(spec));
        h = hyp1_part1(spec, x, theta);
    } else if (a.part == 2) {
        const double theta = a.theta.value_or(0.2);
        const auto table = acquire_table(static_cast<std::uint64_t>(std::max<std::int64_t>(2 * x + a.shift, 2)), g);
        rep.doc["params"]["shift"] = a.shift;
        h = hyp1_part2(spec, table, a.shift, x, theta);
    } else {
        throw InvalidArgument("--part must be 1, 2 or 3");
    }
    rep.doc["params"]["theta"] = num(h.theta);
    rep.doc["params"]["q_max"] = h.q_max;
    json rows = json::array();
    for (const auto& r : h.rows) rows.push_back(row_json(r));
    rep.doc["rows"] = rows;
    rep.doc["totals"] = {{"total", num(h.total)},
                         {"count_a", h.count_a},
                         {"count_p", h.count_p},
                         {"normalized", num(h.normalized)}};
    residue_rows_csv(rep, h.rows);
    return rep;
}

struct LambdaArgs {
    SpecArgs spec;
    std::string n;
    std::uint64_t q = 1;
    std::uint64_t a = 0;
    bool decompose = false;
    std::optional<double> delta;
    std::optional<std::int64_t> K;
    double epsilon = 0.1;
};

Report run_lambda(const LambdaArgs& a, const Globals& g) {
    const auto spec = make_spec(a.spec, g);
    const auto N = parse_count(a.n);
    if (N < 1) throw InvalidArgument("N must be positive");
    const auto M = beatty_term(spec, N);
    const auto table = acquire_table(static_cast<std::uint64_t>(std::max<std::int64_t>(M, 2)), g);
    LambdaSumOptions opt;
    opt.decompose = a.decompose;
    opt.delta = a.delta;
    opt.K = a.K;
    opt.epsilon = a.epsilon;
    const auto r = lambda_beatty_sum(spec, table, N, a.q, a.a, opt);
    Report rep;
    rep.doc["command"] = "lambda-sum";
    rep.doc["note"] = kDeskScaleNote;
    rep.doc["params"] = spec_params(spec);
    rep.doc["params"]["N"] = N;
    rep.doc["params"]["q"] = a.q;
    rep.doc["params"]["a"] = a.a;
    rep.doc["params"]["decompose"] = a.decompose;
    rep.doc["params"]["epsilon"] = num(a.epsilon);
    rep.doc["params"]["precision_bits"] = g.precision_bits;
    rep.doc["rows"] = json::array();
    rep.doc["totals"] = {{"M", r.M},
                         {"S", num(r.S)},
                         {"chebyshev", num(r.chebyshev)},
                         {"main_term", num(r.main_term)},
                         {"error", num(r.error)},
                         {"relative_error", num(r.relative_error)}};
    if (r.decomposition) {
        const auto& d = *r.decomposition;
        rep.doc["decomposition"] = {{"delta", num(d.delta)},
                                    {"K", d.K},
                                    {"k_split", d.k_split},
                                    {"gamma_term", num(d.gamma_term)},
                                    {"small_k", num(d.small_k)},
                                    {"large_k", num(d.large_k)},
                                    {"large_k_trivial", num(d.large_k_trivial)},
                                    {"boundary", num(d.boundary)},
                                    {"boundary_weight", num(d.boundary_weight)},
                                    {"exceptional_count", d.exceptional_count},
                                    {"tail_bound", num(d.tail_bound)},
                                    {"residual", num(d.residual)},
                                    {"within_tail", d.within_tail()}};
    }
    rep.header = {"N", "q", "a", "M", "S", "main_term", "error", "relative_error"};
    rep.rows.push_back({fmt(N), fmt(a.q), fmt(a.a), fmt(r.M), fmt(r.S), fmt(r.main_term), fmt(r.error),
                        fmt(r.relative_error)});
    return rep;
}

struct ClusterArgs {
    SpecArgs spec;
    std::size_t k = 0;
    std::size_t m = 2;
    std::optional<std::string> x, lo, hi;
    std::int64_t search_limit = 10000;
    std::string shifts;
    std::size_t cap = kExemplarCap;
};

Report run_cluster(const ClusterArgs& a, const Globals& g) {
    const auto spec = make_spec(a.spec, g);
    std::int64_t lo = 0, hi = 0;
    if (a.x) {
        lo = parse_count(*a.x);
        hi = 2 * lo;
    } else if (a.lo && a.hi) {
        lo = parse_count(*a.lo);
        hi = parse_count(*a.hi);
    } else {
        throw InvalidArgument("give --x or both --lo and --hi");
    }
    std::optional<LinearFormTuple> tuple;
    if (!a.shifts.empty()) {
        tuple.emplace(parse_list(a.shifts));
    } else {
        if (a.k == 0) throw InvalidArgument("--k is required unless --shifts is given");
        tuple.emplace(beatty_admissible_tuple(spec, a.k, a.search_limit));
    }
    const auto top = std::max<std::int64_t>(hi - 1 + tuple->shifts().back(), 2);
    const auto table = acquire_table(static_cast<std::uint64_t>(top), g);
    const auto r = cluster_search_range(spec, table, *tuple, lo, hi, a.m, a.cap);
    Report rep;
    rep.doc["command"] = "cluster";
    rep.doc["note"] = kDeskScaleNote;
    rep.doc["params"] = spec_params(spec);
    rep.doc["params"]["lo"] = lo;
    rep.doc["params"]["hi"] = hi;
    rep.doc["params"]["m"] = a.m;
    rep.doc["params"]["k"] = tuple->size();
    rep.doc["params"]["search_limit"] = a.search_limit;
    rep.doc["params"]["exemplar_cap"] = a.cap;
    rep.doc["params"]["precision_bits"] = g.precision_bits;
    json tj = {{"shifts", r.shifts}, {"diameter", r.diameter}, {"B", r.tuple_size}};
    if (tuple->origin()) {
        tj["W"] = tuple->origin()->W;
        tj["residue_class"] = tuple->origin()->residue;
    }
    rep.doc["tuple"] = tj;
    rep.doc["rows"] = json::array();
    rep.doc["totals"] = {{"count", r.count}, {"scanned", r.scanned}};
    rep.doc["exemplars"] = cluster_json(r);
    cluster_csv(rep, r);
    return rep;
}

struct LeitmannSearchArgs {
    std::string f;
    std::string lo, hi;
    std::size_t m = 2;
    std::int64_t window = 6;
    std::size_t cap = kExemplarCap;
};

Report run_leitmann_search(const LeitmannSearchArgs& a, const Globals& g) {
    const auto f = LeitmannFunction::parse(a.f);
    const auto lo = parse_count(a.lo), hi = parse_count(a.hi);
    const auto table = acquire_table(static_cast<std::uint64_t>(std::max<std::int64_t>(hi - 1 + a.window, 2)), g);
    const auto r = leitmann_interval_search(f, table, lo, hi, a.m, a.window, a.cap);
    Report rep;
    rep.doc["command"] = "leitmann-search";
    rep.doc["note"] = kDeskScaleNote;
    rep.doc["params"] = {{"f", f.str()}, {"lo", lo}, {"hi", hi}, {"m", a.m}, {"window", a.window},
                         {"exemplar_cap", a.cap}};
    rep.doc["rows"] = json::array();
    rep.doc["totals"] = {{"count", r.count}, {"scanned", r.scanned}};
    rep.doc["exemplars"] = cluster_json(r);
    cluster_csv(rep, r);
    return rep;
}

struct PntArgs {
    std::string f;
    std::string x;
    std::uint64_t q_max = 10;
    std::int64_t shift = 0;
};

Report run_pnt(const PntArgs& a, const Globals& g) {
    const auto f = LeitmannFunction::parse(a.f);
    const auto x = parse_count(a.x);
    const auto table = acquire_table(static_cast<std::uint64_t>(std::max<std::int64_t>(x, 2)), g);
    const auto r = leitmann_pnt_check(f, table, x, a.q_max, a.shift);
    Report rep;
    rep.doc["command"] = "leitmann-pnt";
    rep.doc["note"] = kDeskScaleNote;
    rep.doc["params"] = {{"f", f.str()}, {"x", x}, {"q_max", a.q_max}, {"shift", a.shift}};
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(row_json(row));
    rep.doc["rows"] = rows;
    rep.doc["totals"] = {{"pi_f", r.pi_f},
                         {"li", num(r.li)},
                         {"relative_error", num(r.relative_error)},
                         {"total", num(r.total)},
                         {"g_x", num(r.g_x)},
                         {"normalized", num(r.normalized)}};
    residue_rows_csv(rep, r.rows);
    return rep;
}

struct LadderArgs {
    std::string experiment;
    std::string points;
    std::string statistic;
    SpecArgs spec;
    std::string f;
    std::optional<double> theta;
    std::int64_t shift = 0;
    std::uint64_t q = 1;
    std::uint64_t a = 0;
    std::int64_t k = 1;
    std::string gamma;
};

Report run_ladder(const LadderArgs& a, const Globals& g) {
    const auto xs_i = parse_list(a.points);
    if (xs_i.size() < 3) throw InvalidArgument("a ladder needs at least 3 points");
    for (const auto x : xs_i)
        if (x < 2) throw InvalidArgument("ladder points must be at least 2");
    const auto x_max = *std::max_element(xs_i.begin(), xs_i.end());
    const std::string& e = a.experiment;
    std::string stat = a.statistic;
    Report rep;
    rep.doc["command"] = "ladder";
    rep.doc["note"] = kDeskScaleNote;
    rep.doc["params"] = {{"experiment", e}, {"points", xs_i}};

    std::function<double(std::int64_t)> measure;
    std::optional<BeattySpec> spec;
    std::optional<LeitmannFunction> f;
    std::optional<PrimeTable> table;
    const auto need_spec = [&] {
        spec.emplace(make_spec(a.spec, g));
        rep.doc["params"]["spec"] = spec_params(*spec);
    };
    const auto need_f = [&] {
        f.emplace(LeitmannFunction::parse(a.f));
        rep.doc["params"]["f"] = f->str();
    };
    if (e == "hyp1-part1" || e == "hyp1-part3") {
        need_spec();
        const double theta = a.theta.value_or(default_theta(*spec));
        rep.doc["params"]["theta"] = num(theta);
        if (e == "hyp1-part3") {
            if (stat.empty()) stat = "ratio";
            if (stat != "ratio") throw InvalidArgument("hyp1-part3 statistic is ratio");
            measure = [&, theta](std::int64_t x) { return hyp1_part3(*spec, x, theta).ratio; };
        } else {
            if (stat.empty()) stat = "total";
            if (stat != "total" && stat != "normalized") throw InvalidArgument("statistic must be total or normalized");
            measure = [&, theta, stat](std::int64_t x) {
                const auto h = hyp1_part1(*spec, x, theta);
                return stat == "total" ? h.total : h.normalized;
            };
        }
    } else if (e == "hyp1-part2") {
        need_spec();
        const double theta = a.theta.value_or(0.2);
        rep.doc["params"]["theta"] = num(theta);
        rep.doc["params"]["shift"] = a.shift;
        if (stat.empty()) stat = "total";
        if (stat != "total" && stat != "normalized") throw InvalidArgument("statistic must be total or normalized");
        table.emplace(acquire_table(static_cast<std::uint64_t>(std::max<std::int64_t>(2 * x_max + a.shift, 2)), g));
        measure = [&, theta, stat](std::int64_t x) {
            const auto h = hyp1_part2(*spec, *table, a.shift, x, theta);
            return stat == "total" ? h.total : h.normalized;
        };
    } else if (e == "lambda-sum") {
        need_spec();
        rep.doc["params"]["q"] = a.q;
        rep.doc["params"]["a"] = a.a;
        if (stat.empty()) stat = "abs_error";
        if (stat != "abs_error" && stat != "relative_error")
            throw InvalidArgument("statistic must be abs_error or relative_error");
        table.emplace(acquire_table(
            static_cast<std::uint64_t>(std::max<std::int64_t>(beatty_term(*spec, x_max), 2)), g));
        measure = [&, stat](std::int64_t N) {
            const auto r = lambda_beatty_sum(*spec, *table, N, a.q, a.a);
            return std::fabs(stat == "abs_error" ? r.error : r.relative_error);
        };
    } else if (e == "twisted") {
        if (a.gamma.empty()) throw InvalidArgument("twisted needs --gamma");
        const auto gamma = IrrationalSpec::parse(a.gamma, g.precision_bits);
        rep.doc["params"]["gamma"] = gamma.str();
        rep.doc["params"]["k"] = a.k;
        rep.doc["params"]["q"] = a.q;
        rep.doc["params"]["a"] = a.a;
        if (stat.empty()) stat = "magnitude";
        if (stat != "magnitude") throw InvalidArgument("twisted statistic is magnitude");
        table.emplace(acquire_table(static_cast<std::uint64_t>(x_max), g));
        measure = [&, gamma](std::int64_t M) {
            return twisted_lambda_sum(*table, static_cast<std::uint64_t>(M), a.q, a.a, gamma, a.k).magnitude;
        };
    } else if (e == "leitmann-pnt") {
        need_f();
        rep.doc["params"]["q_max"] = a.q;
        rep.doc["params"]["shift"] = a.shift;
        if (stat.empty()) stat = "total";
        if (stat != "total" && stat != "normalized") throw InvalidArgument("statistic must be total or normalized");
        table.emplace(acquire_table(static_cast<std::uint64_t>(x_max), g));
        measure = [&, stat](std::int64_t x) {
            const auto r = leitmann_pnt_check(*f, *table, x, a.q, a.shift);
            return stat == "total" ? r.total : r.normalized;
        };
    } else if (e == "discrepancy") {
        if (a.spec.alpha.empty() == a.f.empty()) throw InvalidArgument("give exactly one of --alpha and --f");
        rep.doc["params"]["q"] = a.q;
        if (stat.empty()) stat = "d_extreme";
        if (stat != "d_extreme" && stat != "d_star") throw InvalidArgument("statistic must be d_extreme or d_star");
        if (!a.spec.alpha.empty()) {
            auto alpha = IrrationalSpec::parse(a.spec.alpha, g.precision_bits);
            rep.doc["params"]["alpha"] = alpha.str();
            measure = [alpha, q = a.q, stat](std::int64_t N) {
                const auto r = scaled_beatty_discrepancy(alpha, q, static_cast<std::uint64_t>(N));
                return stat == "d_extreme" ? r.d_extreme : r.d_star;
            };
        } else {
            need_f();
            measure = [&, stat](std::int64_t N) {
                const auto r = leitmann_discrepancy(*f, a.q, static_cast<std::uint64_t>(N));
                return stat == "d_extreme" ? r.d_extreme : r.d_star;
            };
        }
    } else {
        throw InvalidArgument("unknown experiment '" + e +
                              "' (hyp1-part1, hyp1-part2, hyp1-part3, lambda-sum, twisted, leitmann-pnt, discrepancy)");
    }
    rep.doc["params"]["statistic"] = stat;

    std::vector<double> xs, ys;
    json rows = json::array();
    rep.header = {"x", stat};
    for (const auto x : xs_i) {
        const double y = measure(x);
        xs.push_back(static_cast<double>(x));
        ys.push_back(y);
        rows.push_back({{"x", x}, {stat, num(y)}});
        rep.rows.push_back({fmt(x), fmt(y)});
    }
    rep.doc["rows"] = rows;
    const auto fit = fit_loglog(xs, ys);
    rep.doc["slopes"] = fit_json(fit);
    if (e == "twisted") rep.doc["totals"] = {{"eta_hat", num(1.0 - fit.slope)}};
    return rep;
}

constexpr const char* kHypFooter =
    "Columns (part 1, 2): q modulus; phi_q Euler phi(q); max_error the largest count deviation over\n"
    "residues a, in elements: part 1 |#A(x;q,a) - #A(x)/q| over all a, part 2\n"
    "|#P(x;q,a) - #P(x)/phi(q)| over (l+a,q)=1 where P counts n in A(x) with n+l prime;\n"
    "argmax_a the residue attaining it. totals.total is the sum of max_error over q <= x^theta,\n"
    "totals.normalized divides it by #A(x) (part 1) or #P(x) (part 2).\n"
    "Part 3: ratio = max over q <= x^theta and a of q #A(x;q,a)/#A(x), dimensionless, >= 1.\n"
    "Default theta: min(1/(2 tau_hat) - 0.01, 0.45) for parts 1 and 3, 0.2 for part 2.";

constexpr const char* kLambdaFooter =
    "Columns: S = sum over n <= N with floor(alpha n + beta) = a mod q and {alpha n + beta} < c\n"
    "of Lambda(floor(alpha n + beta)); main_term = (c/alpha) psi(M; q, a) with M = floor(alpha N + beta);\n"
    "error = S - main_term; relative_error = error / main_term. All in units of log.\n"
    "--decompose adds the smoothed expansion: gamma_term = gamma psi(M;q,a), small_k and large_k\n"
    "the twisted sums 2 Re(g_k U_k) split at k = M^epsilon, boundary the exact correction\n"
    "sum Lambda(m)(psi - psi_Delta)(x_m), exceptional_count V = #{m <= M : x_m within Delta of a jump},\n"
    "tail_bound 4 psi(M;q,a)/(pi^2 K Delta) and residual = S minus the four pieces.";

constexpr const char* kClusterFooter =
    "Reports count = #{n in A, lo <= n < hi : at least m of n + l_i are prime}, exact; scanned = #A\n"
    "in the range. Exemplars (at most --cap) list n, its index r with floor(alpha r + beta) = n, and\n"
    "the primes among n + l_i, each rechecked by Miller-Rabin and by Beatty membership. With a\n"
    "constructed tuple the primes are of the form floor(alpha r) inside a window of length\n"
    "diameter; B is the tuple size k.";

constexpr const char* kPntFooter =
    "Columns: q; phi_q; max_error = max over (a,q)=1 of |pi_f(x;q,a) - li_f/phi(q)| in primes;\n"
    "argmax_a. totals: pi_f = #{p <= x prime : p = floor(f(n)) + shift}; li = integral from\n"
    "f(c0)+shift to x of g'(t - shift)/log t; relative_error = (pi_f - li)/li; total = sum of\n"
    "max_error; g_x = g(x - shift); normalized = total/g_x.";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"primegap: experiments on primes in Beatty and Leitmann sequences"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Globals g;
    app.add_option("--threads", g.threads, "worker count (0 keeps the OpenMP default)");
    app.add_option("--out", g.out, "write the report to this file instead of stdout");
    app.add_flag("--csv", g.csv, "emit the CSV projection of the report");
    app.add_flag("--json", g.json_out, "emit JSON even where CSV is the default");
    app.add_option("--prime-cache", g.prime_cache, "prime table cache file (reused when it covers the limit)");
    app.add_option("--precision-bits", g.precision_bits, "precision budget for irrational enclosures")
        ->capture_default_str();
    app.footer("Environment: PRIMEGAP_CACHE_DIR holds primes_<limit>.pgl caches when --prime-cache is absent.\n"
               "Exit status: 0 success, 2 usage or invalid argument, 3 capacity, precision or other failure.\n"
               "Floats are printed with 15 significant digits; identical configs give identical bytes.");

    std::function<Report()> action;

    CfArgs cf;
    auto* s_cf = app.add_subcommand("cf", "continued fraction, convergents and type estimate");
    s_cf->add_option("--alpha", cf.alpha, "irrational spec")->required();
    s_cf->add_option("--terms", cf.terms, "number of partial quotients")->capture_default_str();
    s_cf->add_option("--type-depth", cf.depth, "levels used by the type estimate")->capture_default_str();
    s_cf->footer("Columns: k index; a partial quotient a_k; p/q convergent p_k/q_k (exact integers).\n"
                 "totals.tau_hat: 1 + max log a_{k+1}/log q_k over the tail half of the levels.");
    s_cf->callback([&] { action = [&] { return run_cf(cf, g); }; });

    BeattyArgs by;
    auto* s_by = app.add_subcommand("beatty", "members of A = {floor(alpha n + beta) : {alpha n + beta} < c}");
    add_spec_options(s_by, by.spec);
    s_by->add_option("--lo", by.lo, "window start (inclusive)")->capture_default_str();
    s_by->add_option("--hi", by.hi, "window end (exclusive)")->required();
    s_by->add_option("--member", by.members, "integers to test for membership");
    s_by->footer("Columns: n index; term floor(alpha n + beta); frac_part {alpha n + beta} (double, reporting only).");
    s_by->callback([&] { action = [&] { return run_beatty(by, g); }; });

    LeitmannArgs lm;
    auto* s_lm = app.add_subcommand("leitmann", "terms floor(f(n)) of a Leitmann function");
    s_lm->add_option("--f", lm.f, "power:G | logpow:C | explog:C,B | iterlog:m")->required();
    s_lm->add_option("--lo", lm.lo, "window start, default floor(f(c0))");
    s_lm->add_option("--hi", lm.hi, "window end (exclusive)")->required();
    s_lm->add_flag("--validate", lm.validate, "sample the growth and convexity conditions");
    s_lm->footer("Columns: n index; term floor(f(n)); frac_part {f(n)} (double, reporting only).");
    s_lm->callback([&] { action = [&] { return run_leitmann(lm, g); }; });

    DiscrepancyArgs dc;
    auto* s_dc = app.add_subcommand("discrepancy", "exact discrepancy of {alpha n/q} or {f(n + c0 - 1)/q}");
    add_spec_options(s_dc, dc.spec, false);
    s_dc->add_option("--f", dc.f, "Leitmann function instead of --alpha");
    s_dc->add_option("--n", dc.n, "sequence lengths N")->required();
    s_dc->add_option("--q", dc.q, "moduli q")->capture_default_str();
    s_dc->add_option("--et-m-max", dc.et_m_max, "Erdos-Turan m searched over [1, this]")->capture_default_str();
    s_dc->add_option("--epsilon", dc.epsilon, "exponent slack in (N/q)^(-1/tau_hat + epsilon)")->capture_default_str();
    s_dc->footer("CSV columns: N length; q modulus; d_star sup |A([0,b))/N - b|; d_extreme sup over\n"
                 "[a,b) of |A([a,b))/N - (b-a)|; et_bound min over m of 6/(m+1) + (4/pi) sum_{h<=m} |S_h|/(hN);\n"
                 "et_m the minimizing m; envelope (N/q)^(-1/tau_hat+epsilon) for --alpha, N^(-1/11) +\n"
                 "sqrt(q) N^(-23/22) for --f. All dimensionless.");
    s_dc->callback([&] { action = [&] { return run_discrepancy(dc, g); }; });

    PsiArgs ps;
    auto* s_ps = app.add_subcommand("psi-delta", "Fourier coefficients of the smoothed indicator of (0, gamma]");
    s_ps->add_option("--gamma", ps.gamma, "interval length in (0, 1)")->capture_default_str();
    s_ps->add_option("--delta", ps.delta, "smoothing half-width, < 1/8")->capture_default_str();
    s_ps->add_option("--K", ps.K, "number of coefficients")->capture_default_str();
    s_ps->footer("CSV columns: k frequency; re_g, im_g real and imaginary part of g_k (h_k = conj g_k);\n"
                 "bound min(2/(pi k), 2/(pi^2 k^2 delta)). totals.tail_bound = 4/(pi^2 K delta).");
    s_ps->callback([&] { action = [&] { return run_psi_delta(ps, g); }; });

    AdmissibleArgs ad;
    auto* s_ad = app.add_subcommand("admissible", "admissible tuple from a Beatty set, or check given shifts");
    add_spec_options(s_ad, ad.spec, false);
    s_ad->add_option("--k", ad.k, "tuple size");
    s_ad->add_option("--search-limit", ad.search_limit, "members scanned for the residue class")
        ->capture_default_str();
    s_ad->add_option("--shifts", ad.shifts, "comma-separated shifts to check instead");
    s_ad->footer("Output: shifts l_i; W product of primes <= k; residue_class the class of A mod W the\n"
                 "shifts come from; diameter max l_i - min l_i.");
    s_ad->callback([&] { action = [&] { return run_admissible(ad, g); }; });

    HypArgs hy;
    auto* s_hy = app.add_subcommand("hyp-check", "error sums of A(x) = A in [x, 2x) in progressions");
    add_spec_options(s_hy, hy.spec);
    s_hy->add_option("--part", hy.part, "1, 2 or 3")->capture_default_str();
    s_hy->add_option("--x", hy.x, "window start")->required();
    s_hy->add_option("--theta", hy.theta, "level, moduli q <= x^theta");
    s_hy->add_option("--shift", hy.shift, "l in L(n) = n + l (part 2)")->capture_default_str();
    s_hy->footer(kHypFooter);
    s_hy->callback([&] { action = [&] { return run_hyp(hy, g); }; });

    LambdaArgs la;
    auto* s_la = app.add_subcommand("lambda-sum", "von Mangoldt sum over a Beatty set in a progression");
    add_spec_options(s_la, la.spec);
    s_la->add_option("--n", la.n, "N, indices n <= N")->required();
    s_la->add_option("--q", la.q, "modulus")->capture_default_str();
    s_la->add_option("--a", la.a, "residue, gcd(a, q) = 1")->capture_default_str();
    s_la->add_flag("--decompose", la.decompose, "evaluate the smoothed-indicator expansion");
    s_la->add_option("--delta", la.delta, "smoothing half-width, default N^(-1/4) clamped");
    s_la->add_option("--K", la.K, "truncation, default max(64, ceil(8/delta))");
    s_la->add_option("--epsilon", la.epsilon, "small k are k <= M^epsilon")->capture_default_str();
    s_la->footer(kLambdaFooter);
    s_la->callback([&] { action = [&] { return run_lambda(la, g); }; });

    ClusterArgs cl;
    auto* s_cl = app.add_subcommand("cluster", "n in A with at least m primes among n + l_i");
    add_spec_options(s_cl, cl.spec);
    s_cl->add_option("--k", cl.k, "size of the constructed tuple");
    s_cl->add_option("--m", cl.m, "primes required")->capture_default_str();
    s_cl->add_option("--x", cl.x, "scan [x, 2x)");
    s_cl->add_option("--lo", cl.lo, "scan start, with --hi");
    s_cl->add_option("--hi", cl.hi, "scan end (exclusive)");
    s_cl->add_option("--search-limit", cl.search_limit, "members scanned when building the tuple")
        ->capture_default_str();
    s_cl->add_option("--shifts", cl.shifts, "comma-separated shifts instead of a constructed tuple");
    s_cl->add_option("--cap", cl.cap, "exemplars kept")->capture_default_str();
    s_cl->footer(kClusterFooter);
    s_cl->callback([&] { action = [&] { return run_cluster(cl, g); }; });

    LeitmannSearchArgs ls;
    auto* s_ls = app.add_subcommand("leitmann-search", "Leitmann terms t with at least m primes in [t, t + window]");
    s_ls->add_option("--f", ls.f, "Leitmann function")->required();
    s_ls->add_option("--lo", ls.lo, "terms t >= lo")->required();
    s_ls->add_option("--hi", ls.hi, "terms t < hi")->required();
    s_ls->add_option("--m", ls.m, "primes required")->capture_default_str();
    s_ls->add_option("--window", ls.window, "window length")->capture_default_str();
    s_ls->add_option("--cap", ls.cap, "exemplars kept")->capture_default_str();
    s_ls->footer("Reports count = #{terms t in [lo, hi) with >= m primes in [t, t + window]}; exemplars\n"
                 "list t, its index n with floor(f(n)) = t, and the primes found.");
    s_ls->callback([&] { action = [&] { return run_leitmann_search(ls, g); }; });

    PntArgs pn;
    auto* s_pn = app.add_subcommand("leitmann-pnt", "primes of the form floor(f(n)) + shift in progressions");
    s_pn->add_option("--f", pn.f, "Leitmann function")->required();
    s_pn->add_option("--x", pn.x, "count primes p <= x")->required();
    s_pn->add_option("--q-max", pn.q_max, "largest modulus")->capture_default_str();
    s_pn->add_option("--shift", pn.shift, "translate f by this integer")->capture_default_str();
    s_pn->footer(kPntFooter);
    s_pn->callback([&] { action = [&] { return run_pnt(pn, g); }; });

    LadderArgs ld;
    auto* s_ld = app.add_subcommand("ladder", "run an experiment over x values and fit log(statistic) vs log x");
    s_ld->add_option("--experiment", ld.experiment,
                     "hyp1-part1 | hyp1-part2 | hyp1-part3 | lambda-sum | twisted | leitmann-pnt | discrepancy")
        ->required();
    s_ld->add_option("--points", ld.points, "comma-separated x values, at least 3 (1e5 style accepted)")->required();
    s_ld->add_option("--statistic", ld.statistic,
                     "total | normalized | ratio | abs_error | relative_error | magnitude | d_extreme | d_star");
    add_spec_options(s_ld, ld.spec, false);
    s_ld->add_option("--f", ld.f, "Leitmann function");
    s_ld->add_option("--theta", ld.theta, "level for hyp1 experiments");
    s_ld->add_option("--shift", ld.shift, "l for hyp1-part2, translate for leitmann-pnt")->capture_default_str();
    s_ld->add_option("--q", ld.q, "modulus (q_max for leitmann-pnt)")->capture_default_str();
    s_ld->add_option("--a", ld.a, "residue")->capture_default_str();
    s_ld->add_option("--k", ld.k, "frequency for twisted")->capture_default_str();
    s_ld->add_option("--gamma", ld.gamma, "irrational gamma for twisted");
    s_ld->footer("rows: x and the statistic. slopes: least-squares slope and intercept of log statistic vs\n"
                 "log x with residuals. twisted reports eta_hat = 1 - slope, the fitted saving in M^(1-eta).\n"
                 "For lambda-sum x is N; for twisted x is M; for discrepancy x is N at fixed q.");
    s_ld->callback([&] { action = [&] { return run_ladder(ld, g); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        if (g.threads < 0) throw InvalidArgument("--threads must be non-negative");
        if (g.threads > 0) set_worker_count(g.threads);
        if (!action) throw InvalidArgument("no subcommand");
        const Report rep = action();
        emit(rep, g, out);
        return kExitOk;
    } catch (const Error& e) {
        std::string msg = e.what();
        const std::string prefix = std::string(to_string(e.kind())) + ": ";
        if (msg.starts_with(prefix)) msg.erase(0, prefix.size());
        err << json{{"error", to_string(e.kind())}, {"message", msg}}.dump() << '\n';
        return e.kind() == ErrorKind::InvalidArgument ? kExitUsage : kExitFailure;
    } catch (const std::exception& e) {
        err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
        return kExitFailure;
    }
}

}  // namespace primegap::cli
