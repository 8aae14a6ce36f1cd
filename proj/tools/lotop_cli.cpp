#include "lotop/arith.hpp"
#include "lotop/relations.hpp"
#include "lotop/report.hpp"
#include "lotop/suite.hpp"
#include "lotop/turing.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace lotop;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// "key=value,key=value" into a map; unknown keys are rejected by the caller.
std::map<std::string, std::uint64_t> parse_kv(const std::string& text)
{
    std::map<std::string, std::uint64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("expected key=value in '" + item + "'");
        try {
            out[item.substr(0, eq)] = std::stoull(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("bad number in '" + item + "'");
        }
    }
    return out;
}

Bounds parse_limits(const std::string& text)
{
    Bounds b;
    for (const auto& [k, v] : parse_kv(text)) {
        if (k == "depth") b.depth = v;
        else if (k == "enum") b.enum_bound = v;
        else if (k == "fuel") b.fuel = v;
        else throw UsageError("unknown limit: " + k);
    }
    return b;
}

// "O 1 3" and "O:1:3" name the same built-in; braces give an explicit list.
// A single word goes through parse_collection, which also accepts O:3:5.
Collection collection_arg(const std::vector<std::string>& words)
{
    if (words.empty()) throw UsageError("collection expected");
    if (words.size() == 1) {
        return parse_collection(words[0]);
    }
    std::string name = words[0];
    for (std::size_t i = 1; i < words.size(); ++i) name += ":" + words[i];
    return parse_collection(name);
}

Collection one_collection(const std::string& w) { return collection_arg({w}); }

void emit(const json& j, const std::string& out)
{
    std::string text = j.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw UsageError("cannot write " + out);
    f << text;
}

json members_json(const Collection& c, std::uint64_t count)
{
    json m = json::array();
    if (c.is_finite()) {
        for (const auto& s : c.members()) m.push_back(s.to_string());
    } else {
        for (std::uint64_t i = 0; i < count; ++i) m.push_back(c.at(i).to_string());
    }
    return m;
}

json app_json(const AppResult& r)
{
    json j{{"kind", r.is_defined() ? "Defined" : r.is_stuck() ? "Stuck" : "FuelExhausted"}};
    if (r.is_defined()) j["value"] = r.value.str();
    return j;
}

Nat nat_arg(const std::string& s)
{
    try {
        return Nat(s);
    } catch (const std::exception&) {
        throw UsageError("not a natural number: " + s);
    }
}

json atlas(const Bounds& bounds)
{
    auto names = finite_builtin_names();
    json rows = json::array();
    for (const auto& a : names)
        for (const auto& b : names) {
            Collection ca = make_builtin(a), cb = make_builtin(b);
            json row{{"left", a}, {"right", b}};
            auto mo = check_leq_mo(ca, cb, codes::id(), bounds);
            row["leq_mo_id"] = to_json(mo.verdict);
            if (mo.verdict.passed()) row["leq_mo_certificate"] = to_json(mo.cert);
            auto ip = refute_leq_lo_by_ip(ca, cb, bounds);
            if (ip) {
                row["leq_lo"] = to_json(ip->verdict);
                row["not_leq_lo_certificate"] = to_json(ip->cert);
            } else {
                row["leq_lo"] = to_json(Verdict::unknown("no intersection-property obstruction"));
            }
            rows.push_back(std::move(row));
        }
    return json{{"builtins", names}, {"bounds", describe(bounds)}, {"pairs", rows}};
}

// Data on F* against the join of O(m,2m+1), m <= k. Reports facts, never a verdict.
json owedge_experiment(std::uint64_t k, const Bounds& bounds)
{
    if (k < 1) throw UsageError("k >= 1 required");
    Collection w = co_m_tons_checked(1, 3);
    for (std::uint64_t m = 2; m <= k; ++m) w = join_owedge(w, co_m_tons_checked(m, 2 * m + 1));
    auto me = min_empty_intersection(w);
    json j{{"question", fmt::format("F* not <=_lo join of O(m,2m+1) for m <= {}", k)},
           {"right", w.label()},
           {"right_members", w.size()},
           {"right_min_empty_intersection", me ? json(me->d) : json(nullptr)},
           {"left_all_n_ip", cofinites().facts().all_n_ip}};
    auto ip = refute_leq_lo_by_ip(cofinites(), w, bounds);
    j["ip_refutation"] = ip ? to_json(ip->cert) : json(nullptr);
    auto back = refute_leq_lo_by_ip(w, cofinites(), bounds);
    j["converse_ip_refutation"] = back ? to_json(back->cert) : json(nullptr);
    j["status"] = "open";
    return j;
}

PiKSpec spec_from_file(const std::string& path)
{
    if (path.empty()) return evens_spec();
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read " + path);
    json j;
    try {
        j = json::parse(f);
        return make_spec(j.at("k").get<std::size_t>(), j.at("phi").get<std::string>(),
                         j.value("truth_bound", std::uint64_t{30}), j.value("bound_exact", false),
                         j.value("predicate", std::string{}));
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad spec: ") + e.what());
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"lotop: local operators in the effective topos"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string limits_text, out;
    std::uint64_t seed = SuiteOptions{}.seed;
    app.add_option("--limits", limits_text, "depth=D,enum=E,fuel=F");
    app.add_option("--seed", seed, "seed for randomized checks");

    // pca
    auto* pca = app.add_subcommand("pca", "evaluate codes and pairings");
    pca->require_subcommand(1);
    std::string term;
    std::vector<std::string> args;
    auto* pca_eval = pca->add_subcommand("eval", "compile a term and apply it");
    pca_eval->add_option("term", term)->required();
    pca_eval->add_option("args", args);
    auto* pca_pair = pca->add_subcommand("pair", "Cantor pair of x and y");
    pca_pair->add_option("args", args)->required()->expected(2);
    auto* pca_unpair = pca->add_subcommand("unpair", "components of z");
    pca_unpair->add_option("args", args)->required()->expected(1);

    // collections
    auto* coll = app.add_subcommand("collections", "browse collections");
    coll->require_subcommand(1);
    std::vector<std::string> words;
    bool as_json = false;
    std::uint64_t count = 8;
    auto* show = coll->add_subcommand("show", "list members");
    auto* dual_cmd = coll->add_subcommand("dual", "list members of the dual");
    for (auto* c : {show, dual_cmd}) {
        c->add_option("collection", words)->required();
        c->add_flag("--json", as_json);
        c->add_option("--count", count, "members listed for families");
    }
    auto* list = coll->add_subcommand("list", "finite built-in names");

    // relation
    auto* rel = app.add_subcommand("relation", "check and refute relations");
    rel->require_subcommand(1);
    std::string left, right, realizer = "id";
    auto* leq_mo = rel->add_subcommand("leq-mo", "A <=_mo B with a realizer");
    leq_mo->add_option("left", left)->required();
    leq_mo->add_option("right", right)->required();
    leq_mo->add_option("--realizer", realizer, "term or 'id'");
    auto* refute = rel->add_subcommand("refute-lo", "refute A <=_lo B by intersection property");
    refute->add_option("left", left)->required();
    refute->add_option("right", right)->required();
    auto* atlas_cmd = rel->add_subcommand("atlas", "pairwise matrix over finite built-ins");
    atlas_cmd->add_option("--out", out);
    std::uint64_t k = 2;
    auto* experiment = rel->add_subcommand("experiment", "F* against the join of O(m,2m+1), m <= k");
    experiment->add_option("--k", k);

    // sight
    auto* sight = app.add_subcommand("sight", "sight utilities");
    sight->require_subcommand(1);
    std::string sight_text;
    auto* sexport = sight->add_subcommand("export", "DOT rendering of a sight");
    sexport->add_option("sight", sight_text)->required();
    sexport->add_option("--out", out);

    // turing
    auto* turing = app.add_subcommand("turing", "Turing extraction");
    turing->require_subcommand(1);
    std::string predicate = "evens";
    std::uint64_t m = 1, alpha = 3, range = 100;
    auto* extract = turing->add_subcommand("extract", "recover chi_D through O(m,alpha)");
    extract->add_option("--predicate", predicate);
    extract->add_option("--m", m);
    extract->add_option("--alpha", alpha);
    extract->add_option("--range", range);

    // arith
    auto* arith = app.add_subcommand("arith", "arithmetic realizability");
    arith->require_subcommand(1);
    std::string formula, theta_text = "{}", bounds_text, realizer_text;
    auto* realize = arith->add_subcommand("realize", "check n theta-realizes a sentence");
    realize->add_option("--formula", formula)->required();
    realize->add_option("--theta", theta_text);
    realize->add_option("--bounds", bounds_text, "q=Q,fuel=F");
    realize->add_option("--realizer", realizer_text, "defaults to the Kleene realizer of a Delta_0 sentence");

    // fstar
    auto* fstar = app.add_subcommand("fstar", "effectiveness in F*");
    fstar->require_subcommand(1);
    std::string spec_path;
    std::uint64_t n_max = 20, child_bound = 30, max_nodes = 1500;
    auto* effective = fstar->add_subcommand("effective", "eps_n support reports for n < n-max");
    effective->add_option("--spec", spec_path, "JSON {k, phi, truth_bound, bound_exact, predicate}");
    effective->add_option("--n-max", n_max);
    effective->add_option("--child-bound", child_bound);
    effective->add_option("--max-nodes", max_nodes);
    effective->add_option("--report", out);

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "run the acceptance battery");
    std::string suite = "chapter3";
    std::vector<int> only;
    reproduce->add_option("--suite", suite);
    reproduce->add_option("--only", only, "check ids");
    reproduce->add_option("--report", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ensure_standard_predicates();
        Bounds bounds = limits_text.empty() ? Bounds{} : parse_limits(limits_text);

        if (*pca_eval) {
            std::vector<Nat> ns;
            for (const auto& a : args) ns.push_back(nat_arg(a));
            Code c = compile(term);
            json j{{"code", c.str()}};
            if (!ns.empty()) j["result"] = app_json(apply_n(c, ns, bounds.fuel));
            emit(j, "");
        } else if (*pca_pair) {
            emit(json{{"z", encode_pair(nat_arg(args[0]), nat_arg(args[1])).str()}}, "");
        } else if (*pca_unpair) {
            auto [x, y] = decode_pair(nat_arg(args[0]));
            emit(json{{"x", x.str()}, {"y", y.str()}}, "");
        } else if (*show || *dual_cmd) {
            Collection c = collection_arg(words);
            if (*dual_cmd) c = dual(c);
            if (as_json)
                emit(json{{"collection", c.label()}, {"finite", c.is_finite()}, {"members", members_json(c, count)}},
                     "");
            else if (c.is_finite())
                std::cout << c.to_string() << "\n";
            else {
                auto ms = members_json(c, count);
                std::string line;
                for (const auto& s : ms) line += (line.empty() ? "" : ",") + s.get<std::string>();
                std::cout << line << ",...\n";
            }
        } else if (*list) {
            emit(json(finite_builtin_names()), "");
        } else if (*leq_mo) {
            Code r = realizer == "id" ? codes::id() : compile(realizer);
            auto res = check_leq_mo(one_collection(left), one_collection(right), r, bounds);
            emit(check_json("leq-mo", left + " <=_mo " + right, res.verdict, describe(bounds), to_json(res.cert)),
                 "");
            return res.verdict.is_refuted() ? 1 : 0;
        } else if (*refute) {
            auto res = refute_leq_lo_by_ip(one_collection(left), one_collection(right), bounds);
            if (!res) {
                emit(check_json("refute-lo", left + " not <=_lo " + right,
                                Verdict::unknown("no intersection-property obstruction"), describe(bounds), {}),
                     "");
                return 1;
            }
            emit(check_json("refute-lo", left + " not <=_lo " + right, res->verdict, describe(bounds),
                            to_json(res->cert)),
                 "");
        } else if (*atlas_cmd) {
            emit(atlas(bounds), out);
        } else if (*experiment) {
            emit(owedge_experiment(k, bounds), "");
        } else if (*sexport) {
            std::string dot = to_dot(parse_sight(sight_text));
            if (out.empty()) {
                std::cout << dot;
            } else {
                std::ofstream f(out);
                if (!f) throw UsageError("cannot write " + out);
                f << dot;
            }
        } else if (*extract) {
            if (!predicate_registered(predicate)) throw UsageError("unknown predicate: " + predicate);
            if (!(1 < 2 * m && 2 * m < alpha)) throw UsageError("need 1 < 2m < alpha");
            Code gamma = dedicated_gamma(effectiveness_realizer(predicate).r);
            auto ex = extract_characteristic(gamma, m, alpha, range, bounds.fuel, predicate);
            json values = json::array();
            for (const auto& v : ex.values) values.push_back(v ? json(v->str()) : json(nullptr));
            json j = check_json("turing-extract", fmt::format("chi_{} through O({},{})", predicate, m, alpha),
                                ex.verdict, fmt::format("n<{}, fuel={}", range, bounds.fuel), {});
            j["values"] = values;
            emit(j, "");
            return ex.verdict.is_refuted() ? 1 : 0;
        } else if (*realize) {
            FormulaRef f = parse_formula(formula);
            RealizeBounds rb;
            for (const auto& [key, v] : parse_kv(bounds_text)) {
                if (key == "q") rb.q = v;
                else if (key == "fuel") rb.search.fuel = v;
                else if (key == "depth") rb.search.depth = v;
                else if (key == "enum") rb.search.enum_bound = v;
                else throw UsageError("unknown bound: " + key);
            }
            Nat n;
            if (!realizer_text.empty()) {
                n = nat_arg(realizer_text);
            } else {
                auto kr = kleene_realizer(f);
                if (!kr) throw UsageError("no --realizer given and the sentence is not a true Delta_0 sentence");
                n = *kr;
            }
            Verdict v = theta_realizes(n, f, parse_theta(theta_text), rb);
            json j = check_json("arith-realize", to_string(f), v,
                                fmt::format("q={}, fuel={}", rb.q, rb.search.fuel), {});
            j["realizer"] = n.str();
            j["theta"] = theta_text;
            emit(j, "");
            return v.is_refuted() ? 1 : 0;
        } else if (*effective) {
            PiKSpec spec = spec_from_file(spec_path);
            SupportBounds sb;
            sb.child_bound = child_bound;
            sb.max_nodes = max_nodes;
            sb.fuel = bounds.fuel;
            std::string bounds_note = fmt::format("children<{},nodes<={},fuel={}", child_bound, max_nodes, sb.fuel);
            std::mt19937_64 rng(seed);
            json rows = json::array();
            bool refuted = false;
            for (std::uint64_t n = 0; n < n_max; ++n) {
                sb.seed = rng();
                EpsilonReport r = epsilon_report(spec, n, sb);
                refuted = refuted || r.overall.is_refuted();
                rows.push_back(json{{"n", n},
                                    {"seed", sb.seed},
                                    {"member", r.member},
                                    {"tau_root", to_json(r.tau_root)},
                                    {"ceiling", to_json(r.ceiling)},
                                    {"leaves_sampled", r.leaves_sampled},
                                    {"support", to_json(r.support)},
                                    {"verdict", to_json(r.overall)}});
            }
            emit(json{{"phi", to_string(spec.phi)},
                      {"k", spec.k},
                      {"predicate", spec.predicate},
                      {"bounds", bounds_note},
                      {"seed", seed},
                      {"reports", rows}},
                 out);
            return refuted ? 1 : 0;
        } else if (*reproduce) {
            SuiteOptions opts;
            opts.seed = seed;
            opts.only = only;
            std::vector<std::string> ids;
            for (const auto& c : chapter3_checks()) ids.push_back(std::to_string(c.id));
            bool failed = false;
            json checks = json::array();
            run_suite(suite, opts, [&](const CheckResult& r) {
                failed = failed || !r.passed();
                std::cerr << fmt::format("{:<4} {:2} {:<28} {}\n", r.passed() ? "PASS" : "FAIL", r.id, r.name,
                                         kind_name(r.verdict.kind));
                json j = to_json(r);
                j["id"] = r.id;
                checks.push_back(std::move(j));
            });
            emit(json{{"suite", suite}, {"seed", seed}, {"checks", checks}}, out);
            return failed ? 1 : 0;
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ArithParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
