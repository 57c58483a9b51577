#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <yonedalab/io.hpp>
#include <yonedalab/stabilization.hpp>
#include <yonedalab/verify.hpp>

using namespace yl;
using json = nlohmann::ordered_json;

namespace {

struct Window {
    int lo = 0, hi = 0;
};

Window parse_range(const std::string& s, const std::string& what) {
    auto pos = s.find("..");
    if (pos == std::string::npos) throw InputError(what + ": expected lo..hi, got " + s);
    try {
        std::size_t a = 0, b = 0;
        Window w{std::stoi(s.substr(0, pos), &a), std::stoi(s.substr(pos + 2), &b)};
        if (a != pos || b != s.size() - pos - 2) throw std::invalid_argument(s);
        if (w.lo > w.hi) throw InputError(what + ": lo must not exceed hi in " + s);
        return w;
    } catch (const std::logic_error&) {
        throw InputError(what + ": expected integers lo..hi, got " + s);
    }
}

struct Job {
    std::string algebra_path;
    std::string command;
    std::string format = "table";
    std::string out;
    bool strict = false;
    std::string m, n, x;
    int max_deg = -1;
    std::string range = "-4..4";
    std::string window = "-3..3";
    bool complete = false;
    std::optional<int> bar_cap, filt_cap;
    std::uint64_t seed = 7;
};

json minimal_json(const MinimalDims& m, int lo, int hi) {
    std::vector<long long> d, r;
    for (int n = lo; n <= hi; ++n) d.push_back(m.dim(n));
    for (int n = lo; n < hi; ++n) r.push_back(m.rank(n));
    json j;
    j["dims"] = d;
    j["ranks"] = r;
    return j;
}

template <class F>
Report run(const Workspace<F>& W, const Job& job) {
    const auto& A = W.algebra();
    Report R;
    R.command = job.command;
    R.algebra = W.name();
    auto& P = R.parameters;

    if (job.command == "algebra check") {
        std::vector<std::string> mods, cxs;
        for (auto& name : W.defined_modules()) { W.module(name); mods.push_back(name); }
        for (auto& name : W.defined_complexes()) { W.complex(name); cxs.push_back(name); }
        json d;
        d["dimension"] = A.dim();
        d["vertices"] = A.vertices();
        d["basis"] = A.labels();
        d["radical_spanned_by_paths"] = radical_is_bar(A);
        d["modules"] = mods;
        d["complexes"] = cxs;
        R.details = d;
        R.message = "algebra " + W.name() + " is valid";
    } else if (job.command == "bar dump") {
        int top = job.max_deg < 0 ? 4 : job.max_deg;
        P["max_deg"] = top;
        auto B = bar_complex(A, top);
        for (int n = top; n >= 0; --n) R.table.push_back({-n, static_cast<long long>(B.complex().dim(-n)), true, std::nullopt});
        std::vector<std::string> bar;
        for (int a = 0; a < A.bar_dim(); ++a) bar.push_back(A.label(A.bar_basis(a)));
        R.details = json{{"bar_basis", bar}};
    } else if (job.command == "ext") {
        int top = job.max_deg < 0 ? 6 : job.max_deg;
        P["M"] = job.m;
        P["N"] = job.n;
        P["max_deg"] = top;
        auto X = W.complex(job.m), Y = W.complex(job.n);
        int cap = std::max(0, top + 1 + X.bmax() - Y.amin());
        YonedaHom<F> XY(X, Y, cap);
        auto C = XY.complex(0, top + 1);
        for (int n = 0; n <= top; ++n) R.table.push_back({n, cohomology_dim<F>(C, n), true, std::nullopt});
    } else if (job.command == "dsg-hom" || job.command == "tate") {
        auto w = parse_range(job.range, "--range");
        std::string nname = job.command == "tate" ? job.m : job.n;
        P["M"] = job.m;
        if (job.command == "dsg-hom") P["N"] = nname;
        P["range"] = job.range;
        auto M = W.module(job.m), N = W.module(nname);
        for (int n = w.lo; n <= w.hi; ++n) {
            auto s = dsg_hom(M, N, n);
            R.table.push_back({n, s.value, s.stable, s.stable ? std::optional<int>(s.stage) : std::nullopt});
            if (!s.stable) R.warnings.push_back("degree " + std::to_string(n) + " did not stabilize by stage 10");
        }
    } else if (job.command == "resolve") {
        auto w = parse_range(job.window, "--window");
        P["M"] = job.m;
        P["window"] = job.window;
        P["complete"] = job.complete;
        auto M = W.module(job.m);
        if (job.complete) {
            auto C = complete_resolution(M, w.lo, w.hi);
            for (int n = w.lo; n <= w.hi; ++n) R.table.push_back({n, C.window.minimal.dim(n), true, std::nullopt});
            json d = minimal_json(C.window.minimal, w.lo, w.hi);
            d["cohomology"] = C.window.h;
            d["acyclic"] = C.window.acyclic;
            d["injective"] = C.window.injective;
            d["contractible"] = C.contractible;
            R.details = d;
            R.warnings = C.warnings;
        } else {
            int len = std::max(0, -w.lo);
            auto res = proj_resolution(M, len);
            std::vector<std::vector<int>> gens;
            for (int n = w.lo; n <= w.hi; ++n) {
                int i = -n;
                if (i < 0 || i > len) {
                    R.table.push_back({n, 0, true, std::nullopt});
                    continue;
                }
                R.table.push_back({n, static_cast<long long>(res.P[i].module.dim), true, std::nullopt});
                std::vector<int> g;
                for (int v : res.P[i].gens) g.push_back(v + 1);
                gens.push_back(g);
            }
            R.details = json{{"generator_vertices", gens}};
        }
    } else if (job.command == "stab") {
        auto w = parse_range(job.window, "--window");
        P["X"] = job.x;
        P["window"] = job.window;
        if (job.bar_cap) P["bar_cap"] = *job.bar_cap;
        if (job.filt_cap) P["filt_cap"] = *job.filt_cap;
        auto X = W.complex(job.x);
        auto S = stab(X, w.lo, w.hi, job.bar_cap, job.filt_cap);
        for (int n = w.lo; n <= w.hi; ++n) R.table.push_back({n, S.minimal.dim(n), true, std::nullopt});
        json d = minimal_json(S.minimal, w.lo, w.hi);
        std::vector<long long> raw;
        for (int n = w.lo; n <= w.hi; ++n) raw.push_back(static_cast<long long>(S.cx.dim(n)));
        d["raw_dims"] = raw;
        d["cohomology"] = S.h;
        d["acyclic"] = S.acyclic;
        d["injective"] = S.injective;
        d["bar_cap"] = S.bar_cap;
        d["filt_cap"] = S.filt_cap;
        R.details = d;
        if (!gorenstein_probe(A, 8).consistent)
            R.warnings.push_back("Gorenstein probe inconsistent up to n = 8; window dimensions depend on the caps");
    } else if (job.command == "compare") {
        auto w = parse_range(job.window, "--window");
        P["X"] = job.x;
        P["window"] = job.window;
        auto X = W.complex(job.x);
        auto C = comparison_c(X, w.lo, w.hi);
        for (int n = w.lo; n <= w.hi; ++n) {
            auto& s = C.cone_h[n - w.lo];
            R.table.push_back({n, C.stab_minimal.dim(n), s.stable, s.stable ? std::optional<int>(s.stage) : std::nullopt});
        }
        json d;
        std::vector<long long> cone;
        for (auto& s : C.cone_h) cone.push_back(s.value);
        d["cone_cohomology"] = cone;
        d["cocycles_injective"] = C.cocycles_injective;
        d["certified"] = C.certified;
        d["sy_stage"] = C.sy_stage;
        d["sy"] = minimal_json(C.sy_minimal, w.lo, w.hi);
        d["sy_cohomology"] = C.sy_h;
        d["stab"] = minimal_json(C.stab_minimal, w.lo, w.hi);
        d["stab_cohomology"] = C.stab_h;
        d["agree"] = C.agree;
        R.details = d;
        R.warnings = C.warnings;
        if (!C.certified) R.warnings.push_back("the comparison cone is not certified contractible on the window");
        if (!C.agree) R.warnings.push_back("the two windows differ in dimension");
    } else if (job.command == "gorenstein") {
        int top = job.max_deg < 0 ? 8 : job.max_deg;
        P["max_deg"] = top;
        auto G = gorenstein_probe(A, top);
        auto L = regular_module(A);
        for (int n = 0; n <= top; ++n) {
            long long v = 0;
            for (int s = 0; s < A.vertices(); ++s) v += ext_oracle(simple_module(A, s), L, n);
            R.table.push_back({n, v, true, std::nullopt});
        }
        json d;
        d["nonvanishing"] = G.nonvanishing;
        d["tail"] = G.tail;
        d["consistent"] = G.consistent;
        R.details = d;
        if (!G.consistent)
            R.warnings.push_back("Ext^n(S, Lambda) is nonzero within the last " + std::to_string(G.tail) +
                                 " degrees; no finite injective dimension detected up to n = " + std::to_string(top));
    } else if (job.command == "verify") {
        P["seed"] = job.seed;
        auto suites = verify_all(A, W.name(), job.seed);
        json arr = json::array();
        bool ok = true;
        for (auto& s : suites) {
            arr.push_back(json{{"suite", s.name}, {"elements", s.elements}, {"checks", s.checks}, {"failures", s.failures}});
            ok = ok && s.ok();
        }
        R.details = json{{"suites", arr}, {"passed", ok}};
        R.message = ok ? "all identity suites passed" : "identity suite failures";
    }
    return R;
}

// CLI11 reads "-4..4" as a flag; glue window values to their option
std::vector<std::string> normalize(int argc, char** argv) {
    std::vector<std::string> out;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if ((a == "--range" || a == "--window") && i + 1 < argc) {
            out.push_back(a + "=" + argv[++i]);
            continue;
        }
        out.push_back(a);
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations with Yoneda and singular Yoneda dg categories of finite-dimensional algebras", "yonedalab"};
    app.require_subcommand(1);
    Job job;
    app.add_option("-a,--algebra", job.algebra_path, "algebra description (TOML)")->required();
    app.add_option("-f,--format", job.format, "output format")->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("-o,--out", job.out, "write output to this file");
    app.add_flag("--strict", job.strict, "exit with status 2 if any warning is reported");

    auto* alg = app.add_subcommand("algebra", "algebra commands");
    alg->require_subcommand(1);
    auto* check = alg->add_subcommand("check", "validate the algebra and every module and complex in the file");
    auto* bar = app.add_subcommand("bar", "bar construction");
    bar->require_subcommand(1);
    auto* dump = bar->add_subcommand("dump", "dimensions of the bar resolution components");
    dump->add_option("--max-deg", job.max_deg, "highest tensor degree");

    auto* ext = app.add_subcommand("ext", "dim Ext^n(M, N)");
    ext->add_option("M", job.m)->required();
    ext->add_option("N", job.n)->required();
    ext->add_option("--max-deg", job.max_deg, "highest degree (default 6)");

    auto* dsg = app.add_subcommand("dsg-hom", "dim Hom in the singularity category, M to N[n]");
    dsg->add_option("M", job.m)->required();
    dsg->add_option("N", job.n)->required();
    dsg->add_option("--range", job.range, "degrees lo..hi");

    auto* tate = app.add_subcommand("tate", "Tate cohomology dimensions of M");
    tate->add_option("M", job.m)->required();
    tate->add_option("--range", job.range, "degrees lo..hi");

    auto* res = app.add_subcommand("resolve", "projective or complete resolution of M");
    res->add_option("M", job.m)->required();
    res->add_flag("--complete", job.complete, "complete injective resolution on the window");
    res->add_option("--window", job.window, "degrees lo..hi");

    auto* st = app.add_subcommand("stab", "stabilization window of a complex");
    st->add_option("X", job.x, "module name, complex name or complex file")->required();
    st->add_option("--window", job.window, "degrees lo..hi");
    st->add_option("--bar-cap", job.bar_cap, "bar truncation (default: smallest exact cap)");
    st->add_option("--filt-cap", job.filt_cap, "filtration truncation (default: smallest exact cap)");

    auto* cmp = app.add_subcommand("compare", "comparison of the singular Yoneda and stabilization windows");
    cmp->add_option("X", job.x, "module name, complex name or complex file")->required();
    cmp->add_option("--window", job.window, "degrees lo..hi");

    auto* gor = app.add_subcommand("gorenstein", "Ext^n(S, Lambda) for the simple modules");
    gor->add_option("--max-deg", job.max_deg, "highest degree (default 8)");

    auto* ver = app.add_subcommand("verify", "randomized exact identity suites");
    ver->add_option("--seed", job.seed, "random seed");

    for (auto* s : {alg, check, bar, dump, ext, dsg, tate, res, st, cmp, gor, ver}) s->fallthrough();

    auto args = normalize(argc, argv);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*check) job.command = "algebra check";
    else if (*dump) job.command = "bar dump";
    else if (*ext) job.command = "ext";
    else if (*dsg) job.command = "dsg-hom";
    else if (*tate) job.command = "tate";
    else if (*res) job.command = "resolve";
    else if (*st) job.command = "stab";
    else if (*cmp) job.command = "compare";
    else if (*gor) job.command = "gorenstein";
    else if (*ver) job.command = "verify";

    Report report;
    try {
        auto fmt = parse_format(job.format);
        Document doc = load_document(job.algebra_path);
        report = with_field(doc, [&](auto f) {
            using F = decltype(f);
            Workspace<F> W(f, doc);
            return run(W, job);
        });
        std::string text = render(report, fmt);
        if (job.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream os(job.out, std::ios::binary);
            if (!os) throw InputError(job.out + ": cannot open for writing");
            os << text;
        }
        if (fmt == Format::csv)
            for (auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (job.command == "verify" && !report.details["passed"].get<bool>()) {
        for (auto& s : report.details["suites"])
            for (auto& m : s["failures"]) std::cerr << "failed: " << m.get<std::string>() << "\n";
        return 1;
    }
    if (job.strict && !report.warnings.empty()) return 2;
    return 0;
}
