#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "smtrace/selftest.hpp"
#include "smtrace/traces.hpp"

using json = nlohmann::ordered_json;
using namespace smtrace;

namespace {

struct RunConfig {
    std::uint64_t D = 0;
    std::string D_range;
    long long p = 0;
    std::string beta = "auto";
    std::string f_file;
    std::string builtin;
    unsigned prec = 256;
    std::uint64_t cmax = 100000;
    std::vector<std::uint64_t> checkpoints;
    long long terms = 10;
    std::string format = "text";
    std::string out;
    unsigned jobs = 1;
    std::string inject_fault;
};

unsigned decimal_digits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * std::log10(2.0))) + 2;
}

std::string real_str(const Real& r, unsigned bits) {
    return r.str(decimal_digits(bits), std::ios_base::fmtflags());
}

std::string rat_str(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw InputError("cannot open output file: " + cfg.out);
    f << text;
}

Expr load_function(const RunConfig& cfg, bool required) {
    if (!cfg.f_file.empty() && !cfg.builtin.empty())
        throw InputError("--f and --builtin are mutually exclusive");
    if (!cfg.f_file.empty()) {
        std::ifstream in(cfg.f_file);
        if (!in) throw InputError("cannot open expression file: " + cfg.f_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_expr(ss.str());
    }
    if (cfg.builtin == "J" || (cfg.builtin.empty() && !required)) return nullptr;  // builtin J
    if (cfg.builtin == "f37") return builtin_f37();
    if (cfg.builtin.empty())
        throw InputError("an expression is required: --f <file> or --builtin J");
    throw InputError("unknown builtin: " + cfg.builtin + " (available: J, f37)");
}

std::optional<long long> parse_beta(const std::string& s) {
    if (s == "auto") return std::nullopt;
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InputError("--beta must be an integer or \"auto\"");
    }
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const RunConfig& cfg) {
    if (!cfg.D_range.empty()) {
        auto sep = cfg.D_range.find("..");
        if (sep == std::string::npos)
            throw InputError("--D-range must have the form A..B");
        try {
            std::uint64_t a = std::stoull(cfg.D_range.substr(0, sep));
            std::uint64_t b = std::stoull(cfg.D_range.substr(sep + 2));
            return {a, b};
        } catch (const std::exception&) {
            throw InputError("--D-range must have the form A..B with integers");
        }
    }
    if (cfg.D == 0) throw InputError("specify --D or --D-range");
    return {cfg.D, cfg.D};
}

std::vector<std::uint64_t> resolve_checkpoints(const RunConfig& cfg) {
    if (!cfg.checkpoints.empty()) return cfg.checkpoints;
    std::vector<std::uint64_t> cps;  // default: decades up to C_max
    for (std::uint64_t c = 10; c < cfg.cmax; c *= 10) cps.push_back(c);
    cps.push_back(cfg.cmax);
    return cps;
}

// ---------------------------------------------------------------- commands

int cmd_class_numbers(const RunConfig& cfg) {
    auto [lo, hi] = parse_range(cfg);
    struct Row {
        std::uint64_t D;
        bool valid;
        Rational h, hp, hps;
        std::optional<long long> beta;
    };
    std::vector<Row> rows;
    for (std::uint64_t D = lo; D <= hi; ++D) {
        Row row{D, true, 0, 0, 0, std::nullopt};
        if (D % 4 != 0 && D % 4 != 3) {
            row.valid = false;
        } else if (cfg.p == 0) {
            row.h = hurwitz_class_number(D);
        } else {
            row.h = hurwitz_class_number(D);
            row.beta = find_beta(D, cfg.p);
            if (row.beta) {
                row.hp = class_number_level(D, cfg.p, *row.beta);
                row.hps = class_number_star(D, cfg.p);
            }
        }
        rows.push_back(std::move(row));
    }

    std::ostringstream os;
    if (cfg.format == "json") {
        json j;
        j["command"] = "class-numbers";
        j["p"] = cfg.p;
        json table = json::array();
        for (const auto& r : rows) {
            json e;
            e["D"] = r.D;
            if (!r.valid) {
                e["invalid"] = true;
            } else {
                e["H"] = rat_str(r.h);
                if (cfg.p) {
                    if (r.beta) {
                        e["H_p"] = rat_str(r.hp);
                        e["H_p_star"] = rat_str(r.hps);
                        e["beta"] = *r.beta;
                    } else {
                        e["beta"] = nullptr;
                    }
                }
            }
            table.push_back(std::move(e));
        }
        j["rows"] = std::move(table);
        os << j.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        os << (cfg.p ? "D,H,H_p,H_p_star,beta\n" : "D,H\n");
        for (const auto& r : rows) {
            if (!r.valid) {
                os << r.D << (cfg.p ? ",invalid,,,\n" : ",invalid\n");
            } else if (cfg.p == 0) {
                os << r.D << "," << rat_str(r.h) << "\n";
            } else if (r.beta) {
                os << r.D << "," << rat_str(r.h) << "," << rat_str(r.hp) << ","
                   << rat_str(r.hps) << "," << *r.beta << "\n";
            } else {
                os << r.D << "," << rat_str(r.h) << ",,,none\n";
            }
        }
    } else {
        for (const auto& r : rows) {
            os << "D=" << r.D;
            if (!r.valid) {
                os << "  (not a discriminant: D must be 0 or 3 mod 4)\n";
                continue;
            }
            os << "  H=" << rat_str(r.h);
            if (cfg.p) {
                if (r.beta)
                    os << "  H_" << cfg.p << "=" << rat_str(r.hp) << "  H_" << cfg.p
                       << "*=" << rat_str(r.hps) << "  beta=" << *r.beta;
                else
                    os << "  (no beta with beta^2 = -D mod " << 4 * cfg.p << ")";
            }
            os << "\n";
        }
    }
    write_output(cfg, os.str());
    return 0;
}

int cmd_trace(const RunConfig& cfg) {
    if (cfg.D == 0) throw InputError("trace requires --D");
    PrecisionContext ctx(cfg.prec);
    std::vector<std::uint64_t> cps = resolve_checkpoints(cfg);
    if (cfg.p != 0 && cfg.builtin == "J")
        throw InputError("builtin J is a level-1 function; prime-level traces need an "
                         "eta-quotient (--f <file> or --builtin f37)");
    Expr f = load_function(cfg, /*required=*/cfg.p != 0);

    TraceQuery q;
    q.D = cfg.D;
    q.prec = ctx;
    q.c_max = cfg.cmax;
    q.jobs = cfg.jobs;
    if (f) q.f = f;

    json out;
    out["D"] = cfg.D;
    std::optional<long long> beta;
    PrincipalPart pp = f ? principal_part(f)
                         : PrincipalPart{1, {Rational(1)}, Rational(0)};  // builtin J
    ConvergenceReport report;
    DirectTrace direct;
    Rational shift_term = 0;

    if (cfg.p == 0) {
        if (f) throw InputError("level-1 trace supports only the builtin J (Duke's formula)");
        out["p"] = 1;
        out["beta"] = nullptr;
        q.level = Level::gamma1();
        direct = trace_direct(q);
        report = duke_series(cfg.D, cfg.cmax, cps, ctx, cfg.jobs);
    } else {
        beta = parse_beta(cfg.beta);
        if (!beta) {
            beta = find_beta(cfg.D, cfg.p);
            if (!beta)
                throw InputError("no beta with beta^2 = -D (mod 4p) exists for this (D, p)");
        } else if (*beta < 0 || *beta >= 2 * cfg.p
                   || (Int(*beta) * *beta + cfg.D) % (4 * cfg.p) != 0) {
            throw InputError("--beta must lie in [0, 2p) with beta^2 = -D (mod 4p)");
        }
        out["p"] = cfg.p;
        out["beta"] = *beta;  // resolved value, so runs are reproducible
        q.level = Level::star(cfg.p);
        direct = trace_direct(q);
        PrincipalPart shifted = pp;
        if (shifted.a0 != 0) {
            // the exact formula requires a0 = 0: shift f by -a0 and add
            // a0 * H_p*(D) back to every reported value
            shift_term = shifted.a0 * class_number_star(cfg.D, cfg.p);
            shifted.a0 = 0;
        }
        report = theorem1_series(shifted, cfg.D, cfg.p, *beta, cfg.cmax, cps, ctx, cfg.jobs);
        if (shift_term != 0) {
            ScopedPrecision sp(ctx.working_bits());
            Real s(shift_term);
            report.class_term += shift_term;
            for (auto& cp : report.checkpoints) {
                cp.raw += s;
                cp.windowed += s;
            }
            report.final_raw += s;
            report.final_windowed += s;
        }
    }

    json jp;
    jp["N"] = pp.N;
    json coeffs = json::array();
    for (const auto& a : pp.a) coeffs.push_back(rat_str(a));
    jp["a"] = std::move(coeffs);
    jp["a0"] = rat_str(pp.a0);
    out["principal_part"] = std::move(jp);
    if (shift_term != 0) out["constant_shift"] = rat_str(shift_term);

    out["precision_bits"] = cfg.prec;
    out["decimal_digits"] = decimal_digits(cfg.prec);
    out["class_term"] = rat_str(report.class_term);
    json jcps = json::array();
    for (const auto& cp : report.checkpoints) {
        json e;
        e["C"] = cp.c;
        e["raw"] = real_str(cp.raw, cfg.prec);
        e["windowed"] = real_str(cp.windowed, cfg.prec);
        jcps.push_back(std::move(e));
    }
    out["checkpoints"] = std::move(jcps);
    out["direct"] = real_str(direct.value, cfg.prec);
    out["direct_rounded"] = direct.rounded ? json(rat_str(*direct.rounded)) : json(nullptr);
    Real disc;
    {
        ScopedPrecision sp(ctx.working_bits());
        disc = abs(report.final_windowed - direct.value);
    }
    out["discrepancy"] = real_str(disc, cfg.prec);

    std::ostringstream os;
    if (cfg.format == "json") {
        os << out.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        os << "# D=" << cfg.D << " p=" << out["p"] << " beta=" << out["beta"].dump()
           << " precision_bits=" << cfg.prec << "\n";
        os << "# class_term=" << rat_str(report.class_term) << " direct="
           << real_str(direct.value, cfg.prec) << " discrepancy=" << real_str(disc, cfg.prec)
           << "\n";
        os << "C,raw,windowed\n";
        for (const auto& cp : report.checkpoints)
            os << cp.c << "," << real_str(cp.raw, cfg.prec) << ","
               << real_str(cp.windowed, cfg.prec) << "\n";
    } else {
        os << "trace for D=" << cfg.D;
        if (cfg.p) os << ", level p=" << cfg.p << " (Fricke-extended), beta=" << *beta;
        os << "\n";
        os << "precision: " << cfg.prec << " bits (" << decimal_digits(cfg.prec)
           << " decimal digits printed)\n";
        os << "principal part: N=" << pp.N;
        for (long long m = 1; m <= pp.N; ++m) os << "  a_" << m << "=" << rat_str(pp.coefficient(m));
        os << "  a_0=" << rat_str(pp.a0) << "\n";
        if (shift_term != 0)
            os << "constant shift applied (a_0 * H_p*(D)): " << rat_str(shift_term) << "\n";
        os << "exact class term: " << rat_str(report.class_term) << "\n";
        for (const auto& cp : report.checkpoints)
            os << "  C=" << cp.c << "  raw=" << real_str(cp.raw, cfg.prec)
               << "  windowed=" << real_str(cp.windowed, cfg.prec) << "\n";
        os << "direct value:  " << real_str(direct.value, cfg.prec) << "\n";
        if (direct.rounded) os << "rounds to:     " << rat_str(*direct.rounded) << "\n";
        os << "discrepancy (|windowed - direct| at C_max): " << real_str(disc, cfg.prec) << "\n";
    }
    write_output(cfg, os.str());
    return 0;
}

int cmd_expand(const RunConfig& cfg) {
    if (cfg.builtin == "J")
        throw InputError("builtin J is not an eta quotient; expand requires --f or --builtin f37");
    Expr f = load_function(cfg, /*required=*/true);
    if (cfg.terms < 1) throw InputError("--terms must be >= 1");
    QExpansion x = q_expansion(f, cfg.terms);

    std::ostringstream os;
    if (cfg.format == "json") {
        json j;
        j["command"] = "expand";
        j["lead"] = x.lead;
        j["terms"] = x.terms;
        json cs = json::array();
        for (long long n = std::min(x.lead, 0LL); n < x.terms; ++n) {
            json e;
            e["n"] = n;
            e["c"] = rat_str(x.coefficient(n));
            cs.push_back(std::move(e));
        }
        j["coefficients"] = std::move(cs);
        os << j.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        os << "n,c\n";
        for (long long n = std::min(x.lead, 0LL); n < x.terms; ++n)
            os << n << "," << rat_str(x.coefficient(n)) << "\n";
    } else {
        bool first = true;
        for (long long n = std::min(x.lead, 0LL); n < x.terms; ++n) {
            Rational c = x.coefficient(n);
            if (c == 0 && !(n == 0)) continue;
            os << (first ? "" : " + ");
            first = false;
            os << "(" << rat_str(c) << ")";
            if (n == 1) os << "*q";
            else if (n != 0) os << "*q^" << n;
        }
        os << " + O(q^" << x.terms << ")\n";
    }
    write_output(cfg, os.str());
    return 0;
}

int cmd_selftest(const RunConfig& cfg) {
    auto results = run_selftest(cfg.inject_fault);
    std::ostringstream os;
    if (cfg.format == "json") {
        json j = json::array();
        for (const auto& r : results) {
            json e;
            e["suite"] = r.name;
            e["passed"] = r.passed;
            e["detail"] = r.detail;
            e["seconds"] = r.seconds;
            j.push_back(std::move(e));
        }
        os << j.dump(2) << "\n";
    } else {
        double total = 0;
        for (const auto& r : results) {
            os << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.detail << ", "
               << r.seconds << " s)\n";
            total += r.seconds;
        }
        os << (all_passed(results) ? "all suites passed" : "FAILURES present") << ", total "
           << total << " s\n";
    }
    write_output(cfg, os.str());
    return all_passed(results) ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traces of singular moduli: direct CM evaluation vs exact series"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "output format")
            ->check(CLI::IsMember({"text", "json", "csv"}))
            ->capture_default_str();
        sub->add_option("--out", cfg.out, "write output to a file instead of stdout");
    };
    auto add_function = [&](CLI::App* sub) {
        sub->add_option("--f", cfg.f_file, "expression file (eta-quotient grammar)");
        sub->add_option("--builtin", cfg.builtin, "builtin function (J, f37)");
    };

    CLI::App* cn = app.add_subcommand("class-numbers", "tabulate H(D) / H_p(D) / H_p*(D)");
    cn->add_option("--D", cfg.D, "single discriminant D > 0 (for -D)");
    cn->add_option("--D-range", cfg.D_range, "inclusive range A..B");
    cn->add_option("--p", cfg.p, "prime level (omit for level 1)");
    add_common(cn);

    CLI::App* tr = app.add_subcommand("trace", "direct trace vs exact-series trace");
    tr->add_option("--D", cfg.D, "discriminant D > 0 (for -D)")->required();
    tr->add_option("--p", cfg.p, "prime level (omit for level 1 / Duke)");
    tr->add_option("--beta", cfg.beta, "beta with beta^2 = -D (mod 4p), or \"auto\"")
        ->capture_default_str();
    add_function(tr);
    tr->add_option("--prec", cfg.prec, "working precision in bits")->capture_default_str();
    tr->add_option("--cmax", cfg.cmax, "series truncation bound C_max")->capture_default_str();
    tr->add_option("--checkpoints", cfg.checkpoints, "partial-sum checkpoints (default: decades)")
        ->delimiter(',');
    tr->add_option("--jobs", cfg.jobs, "worker threads for the series")->capture_default_str();
    add_common(tr);

    CLI::App* ex = app.add_subcommand("expand", "q-expansion of an expression");
    add_function(ex);
    ex->add_option("--terms", cfg.terms, "coefficients through q^(terms-1)")
        ->capture_default_str();
    add_common(ex);

    CLI::App* st = app.add_subcommand("selftest", "run reduced-size invariant suites");
    st->add_option("--inject-fault", cfg.inject_fault, "force the named suite to fail (testing)");
    add_common(st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    try {
        if (cn->parsed()) return cmd_class_numbers(cfg);
        if (tr->parsed()) return cmd_trace(cfg);
        if (ex->parsed()) return cmd_expand(cfg);
        if (st->parsed()) return cmd_selftest(cfg);
    } catch (const PrecisionError& e) {
        std::cerr << "numerical guarantee violated: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
