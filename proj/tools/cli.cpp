#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "zmtile/cyclotomic.hpp"
#include "zmtile/delsarte.hpp"
#include "zmtile/error.hpp"
#include "zmtile/fourier.hpp"
#include "zmtile/io.hpp"
#include "zmtile/sweep.hpp"
#include "zmtile/tiling.hpp"

namespace zmtile::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

std::vector<int64_t> parse_elements(const std::string& text) {
    std::vector<int64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw InvalidInput("");
        } catch (const std::exception&) {
            throw InvalidInput("'" + tok + "' is not an integer");
        }
    }
    return out;
}

std::string scalar_text(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

class Printer {
public:
    Printer(std::ostream& out, std::string format) : out_(out), format_(std::move(format)) {}

    void emit(const Json& j) const {
        if (format_ == "json") {
            out_ << j.dump() << '\n';
        } else if (format_ == "csv") {
            out_ << "key,value\n";
            for (auto it = j.begin(); it != j.end(); ++it) {
                std::string v = scalar_text(*it);
                if (v.find_first_of(",\"\n") != std::string::npos) {
                    std::string quoted = "\"";
                    for (char c : v) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
                    v = quoted + "\"";
                }
                out_ << it.key() << ',' << v << '\n';
            }
        } else {
            human(j, 0);
        }
    }

    const std::string& format() const { return format_; }
    std::ostream& stream() const { return out_; }

private:
    void human(const Json& j, int indent) const {
        const std::string pad(static_cast<std::size_t>(indent), ' ');
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                out_ << pad << it.key() << ":\n";
                human(*it, indent + 2);
            } else {
                out_ << pad << it.key() << ": " << scalar_text(*it) << '\n';
            }
        }
    }

    std::ostream& out_;
    std::string format_;
};

Rational pick_delta(const Modulus& mod, const std::string& value, const std::string& preset, bool required) {
    if (!value.empty() && !preset.empty()) throw InvalidInput("give either --delta or --delta-preset, not both");
    if (!value.empty()) return Rational::parse(value);
    if (preset == "M") return delta_M(mod);
    if (preset == "screen") return delta_screen(mod);
    if (!preset.empty()) throw InvalidInput("unknown delta preset '" + preset + "' (use M or screen)");
    if (required) throw InvalidInput("this bound needs --delta or --delta-preset M|screen");
    return Rational();
}

Json bound_json(const BoundResult& b, BoundKind kind) {
    return Json{{"kind", to_string(kind)},
                {"feasible", b.feasible},
                {"value", b.feasible ? rational_to_json(b.value) : Json(nullptr)},
                {"extremal", b.extremal ? step_to_json(*b.extremal) : Json(nullptr)}};
}

Json counterexample_json(int64_t p, int64_t q, bool check) {
    const auto [f, g] = counterexample_pair(p, q);
    const auto& mod = f.modulus();
    const Rational lambda(p * p * q);
    const auto report = verify_functional_pd_tiling(f, g);
    const auto ef = eigen_check(f);
    const auto eg = eigen_check(g);

    Json checks = Json::object();
    checks["f_nonnegative"] = f.is_nonnegative();
    checks["g_nonnegative"] = g.is_nonnegative();
    bool meet_at_zero = true;
    for (std::size_t i = 0; i < mod.top_index(); ++i) {
        if (!f.coeff_at(i).is_zero() && !g.coeff_at(i).is_zero()) meet_at_zero = false;
    }
    checks["supports_meet_only_at_0"] = meet_at_zero;
    checks["f_eigenvalue_p2q"] = ef && *ef == lambda;
    checks["g_eigenvalue_p2q"] = eg && *eg == lambda;
    checks["f_weight_p2q"] = total_weight(f) == lambda;
    checks["g_weight_p2q"] = total_weight(g) == lambda;
    checks["functional_pd_tiling"] = report.valid;
    checks["t1_f"] = report.t1_f;
    checks["t1_g"] = report.t1_g;
    checks["t2_f_fails"] = !report.t2_f;
    checks["t2_g_fails"] = !report.t2_g;
    checks["f_t2_witness_pq"] = report.cyclo_f && report.cyclo_f->t2_witness == p * q;
    checks["g_t2_witness_p2q2"] = report.cyclo_g && report.cyclo_g->t2_witness == p * p * q * q;
    bool all = true;
    for (const auto& [k, v] : checks.items()) all = all && v.get<bool>();

    Json j{{"p", p},
           {"q", q},
           {"M", mod.M()},
           {"d", 2 * p * q - p * p - q},
           {"f", step_to_json(f)},
           {"g", step_to_json(g)},
           {"eigenvalue_f", ef ? rational_to_json(*ef) : Json(nullptr)},
           {"eigenvalue_g", eg ? rational_to_json(*eg) : Json(nullptr)},
           {"report", pd_report_to_json(report)}};
    if (check) {
        j["checks"] = checks;
        j["check_passed"] = all;
    }
    return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact tiling and Delsarte LP tools for cyclic groups Z_M", "zmtile"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "human"}));

    std::function<int(const Printer&)> action;

    // info
    int64_t info_M = 0;
    auto* info = app.add_subcommand("info", "Factorization, divisors, phi and mu of M");
    info->add_option("M", info_M, "Modulus")->required();
    info->callback([&] {
        action = [&](const Printer& pr) {
            const Modulus mod(info_M);
            Json factors = Json::array();
            for (const auto& f : mod.factors()) factors.push_back({{"p", f.prime}, {"e", f.exponent}});
            Json divs = Json::array();
            for (std::size_t i = 0; i < mod.num_divisors(); ++i) {
                divs.push_back({{"d", mod.divisor(i)},
                                {"phi", mod.phi(i)},
                                {"mu", mod.mu(i)},
                                {"class_size", mod.class_size(i)}});
            }
            pr.emit(Json{{"M", mod.M()},
                         {"factors", factors},
                         {"num_divisors", mod.num_divisors()},
                         {"phi_M", mod.phi_of(mod.M())},
                         {"divisors", divs}});
            return kExitOk;
        };
    });

    // ft
    std::string ft_file;
    auto* ft = app.add_subcommand("ft", "Fourier transform of a step function given as JSON");
    ft->add_option("file", ft_file, "Step function JSON file")->required();
    ft->callback([&] {
        action = [&](const Printer& pr) {
            const auto f = step_from_json(parse_json(read_file(ft_file)));
            if (f.is_zero()) {
                pr.emit(Json{{"input", step_to_json(f)}, {"transform", step_to_json(f)}, {"eigenvalue", nullptr}});
                return kExitOk;
            }
            const auto lambda = eigen_check(f);
            pr.emit(Json{{"input", step_to_json(f)},
                         {"transform", step_to_json(ft_step(f))},
                         {"eigenvalue", lambda ? rational_to_json(*lambda) : Json(nullptr)}});
            return kExitOk;
        };
    });

    // cyclo
    std::string cy_file, cy_set;
    int64_t cy_M = 0;
    auto* cy = app.add_subcommand("cyclo", "Cyclotomic spectrum and (T1)/(T2) of a set or step function");
    cy->add_option("file", cy_file, "TileSet or step function JSON file");
    cy->add_option("--M", cy_M, "Modulus (with --set)");
    cy->add_option("--set", cy_set, "Comma-separated elements of A");
    cy->callback([&] {
        action = [&](const Printer& pr) {
            Json j;
            if (!cy_set.empty()) {
                if (cy_M < 2) throw InvalidInput("--set needs --M");
                const TileSet A(Modulus(cy_M), parse_elements(cy_set));
                j = Json{{"input", tileset_to_json(A)}, {"report", cyclo_to_json(t1t2_report(A.indicator()))}};
            } else if (!cy_file.empty()) {
                const auto in = parse_json(read_file(cy_file));
                if (in.contains("elements")) {
                    const auto A = tileset_from_json(in);
                    j = Json{{"input", tileset_to_json(A)}, {"report", cyclo_to_json(t1t2_report(A.indicator()))}};
                } else {
                    const auto f = step_from_json(in);
                    j = Json{{"input", step_to_json(f)}, {"report", cyclo_to_json(t1t2_report(f))}};
                }
            } else {
                throw InvalidInput("cyclo needs a file or --M with --set");
            }
            pr.emit(j);
            return kExitOk;
        };
    });

    // delsarte
    int64_t ds_M = 0;
    std::string ds_H, ds_kind = "all", ds_delta, ds_preset;
    auto* ds = app.add_subcommand("delsarte", "Delsarte LP bounds D+, D-, D^{delta+} for a class set H");
    ds->add_option("--M", ds_M, "Modulus")->required();
    ds->add_option("--H", ds_H, "Classes of H: divisor list '12,4,1' or hex bitmask '0x...'")->required();
    ds->add_option("--kind", ds_kind, "plus, minus, delta_plus or all")
        ->check(CLI::IsMember({"plus", "minus", "delta_plus", "all"}));
    ds->add_option("--delta", ds_delta, "delta as n/d");
    ds->add_option("--delta-preset", ds_preset, "M = 1/(M phi(M)), screen = 1/(M^2 phi(M))");
    ds->callback([&] {
        action = [&](const Printer& pr) {
            const Modulus mod(ds_M);
            const auto H = ClassSet::parse(mod, ds_H);
            const bool needs_delta = ds_kind == "delta_plus" || ds_kind == "all";
            const Rational delta = pick_delta(mod, ds_delta, ds_preset, needs_delta);
            const StepFourierMatrix T(mod);
            Json bounds = Json::array();
            for (BoundKind k : {BoundKind::plus, BoundKind::minus, BoundKind::delta_plus}) {
                if (ds_kind != "all" && ds_kind != to_string(k)) continue;
                bounds.push_back(bound_json(delsarte_bound(H, k, delta, T), k));
            }
            Json j{{"H", classset_to_json(H)}, {"k_H", k_of(H)}};
            if (needs_delta) j["delta"] = rational_to_json(delta);
            j["bounds"] = bounds;
            pr.emit(j);
            return kExitOk;
        };
    });

    // screen
    int64_t sc_M = 0;
    std::string sc_H, sc_delta, sc_preset;
    bool sc_plus = false;
    auto* sc = app.add_subcommand("screen", "Check D^{delta+}(H) = D+(H) = D-(H) = k_H");
    sc->add_option("--M", sc_M, "Modulus")->required();
    sc->add_option("--H", sc_H, "Class set H")->required();
    sc->add_option("--delta", sc_delta, "delta as n/d");
    sc->add_option("--delta-preset", sc_preset, "M or screen");
    sc->add_flag("--solve-plus", sc_plus, "Solve D+ instead of reading it off the sandwich");
    sc->callback([&] {
        action = [&](const Printer& pr) {
            const Modulus mod(sc_M);
            const auto H = ClassSet::parse(mod, sc_H);
            const auto r = screen(H, pick_delta(mod, sc_delta, sc_preset, true), sc_plus);
            pr.emit(Json{{"H", classset_to_json(H)}, {"screen", screen_to_json(r)}});
            return kExitOk;
        };
    });

    // sands
    int64_t sa_M = 0;
    std::string sa_A, sa_B;
    auto* sa = app.add_subcommand("sands", "Sands' criterion for A (+) B = Z_M, checked against direct sums");
    sa->add_option("--M", sa_M, "Modulus")->required();
    sa->add_option("A", sa_A, "Elements of A, comma-separated")->required();
    sa->add_option("B", sa_B, "Elements of B, comma-separated")->required();
    sa->callback([&] {
        action = [&](const Printer& pr) {
            const Modulus mod(sa_M);
            const TileSet A(mod, parse_elements(sa_A));
            const TileSet B(mod, parse_elements(sa_B));
            const bool s = sands_check(A, B);
            const bool d = tiles_directly(A, B);
            pr.emit(Json{{"A", tileset_to_json(A)},
                         {"B", tileset_to_json(B)},
                         {"div_A", div_star(A).members()},
                         {"div_B", div_star(B).members()},
                         {"sands", s},
                         {"direct", d}});
            if (s != d) {
                err << "sands criterion and direct check disagree\n";
                return kExitCheckFailed;
            }
            return kExitOk;
        };
    });

    // pdtile
    int64_t pd_M = 0;
    std::string pd_A;
    auto* pd = app.add_subcommand("pdtile", "Does A admit a pd-tiling complement f (1_A * f = 1)?");
    pd->add_option("--M", pd_M, "Modulus")->required();
    pd->add_option("A", pd_A, "Elements of A, comma-separated")->required();
    pd->callback([&] {
        action = [&](const Printer& pr) {
            const TileSet A(Modulus(pd_M), parse_elements(pd_A));
            const auto r = pd_tile_feasible(A);
            pr.emit(Json{{"A", tileset_to_json(A)},
                         {"feasible", r.feasible},
                         {"witness", r.witness ? step_to_json(*r.witness) : Json(nullptr)}});
            return kExitOk;
        };
    });

    // counterexample
    int64_t ce_p = 0, ce_q = 0;
    bool ce_check = false;
    auto* ce = app.add_subcommand("counterexample", "Functional pd-tiling on M = p^4 q^2 violating (T2)");
    ce->add_option("-p", ce_p, "Prime p")->required();
    ce->add_option("-q", ce_q, "Prime q with p < q < p^2")->required();
    ce->add_flag("--check", ce_check, "Verify every property; exit 1 if one fails");
    ce->callback([&] {
        action = [&](const Printer& pr) {
            const auto j = counterexample_json(ce_p, ce_q, ce_check);
            pr.emit(j);
            if (ce_check && !j["check_passed"].get<bool>()) {
                err << "counterexample check failed\n";
                return kExitCheckFailed;
            }
            return kExitOk;
        };
    });

    // pair-from-H
    int64_t pf_M = 0;
    std::string pf_H;
    auto* pf = app.add_subcommand("pair-from-H", "Build a functional pd-tiling (f, g) from a screened H");
    pf->add_option("--M", pf_M, "Modulus")->required();
    pf->add_option("--H", pf_H, "Class set H")->required();
    pf->callback([&] {
        action = [&](const Printer& pr) {
            const Modulus mod(pf_M);
            const auto H = ClassSet::parse(mod, pf_H);
            const auto pair = construct_pd_pair(H);
            if (!pair) {
                pr.emit(Json{{"H", classset_to_json(H)}, {"pair", nullptr}});
                err << "no pair found for this H\n";
                return kExitCheckFailed;
            }
            pr.emit(Json{{"H", classset_to_json(H)},
                         {"swapped", pair->swapped},
                         {"f", step_to_json(pair->f)},
                         {"g", step_to_json(pair->g)},
                         {"report", pd_report_to_json(verify_functional_pd_tiling(pair->f, pair->g))}});
            return kExitOk;
        };
    });

    // clique
    int64_t cl_M = 0;
    std::string cl_H;
    auto* cl = app.add_subcommand("clique", "Clique number of the Cayley graph Gamma_H");
    cl->add_option("--M", cl_M, "Modulus")->required();
    cl->add_option("--H", cl_H, "Class set H")->required();
    cl->callback([&] {
        action = [&](const Printer& pr) {
            const auto H = ClassSet::parse(Modulus(cl_M), cl_H);
            const auto clique = maximum_clique(H);
            pr.emit(Json{{"H", classset_to_json(H)}, {"omega", clique.size()}, {"clique", clique}});
            return kExitOk;
        };
    });

    // sweep
    SweepConfig cfg;
    std::string sw_row, sw_out, sw_viol, sw_json, sw_shard, sw_range, sw_delta, sw_preset;
    bool sw_all = false, sw_no_prescreen = false;
    auto* sw = app.add_subcommand("sweep", "Screen all candidate class sets of M = (p1 p2 p3)^2");
    sw->add_option("--M", cfg.M, "Modulus (default 11025)");
    sw->add_option("--row", sw_row, "Selected prime powers, e.g. 3,5,7");
    sw->add_flag("--all-rows", sw_all, "Run all 8 selections");
    sw->add_option("--out", sw_out, "CSV output path (stdout if omitted)");
    sw->add_option("--violators", sw_viol, "JSON-lines file for (T2)-violating H");
    sw->add_option("--json", sw_json, "Full result JSON (input for sweep-merge)");
    sw->add_option("--checkpoint", cfg.checkpoint_path, "Checkpoint file; resumed when present");
    sw->add_option("--shard", sw_shard, "i/n: run the i-th of n contiguous counter ranges");
    sw->add_option("--range", sw_range, "begin:end counter range within each row");
    sw->add_option("--delta", sw_delta, "delta as n/d");
    sw->add_option("--delta-preset", sw_preset, "screen (default) or M");
    sw->add_flag("--no-prescreen", sw_no_prescreen, "Exact LPs only");
    sw->add_flag("--full-screen", cfg.full_screen, "Also solve D+ and report those counts");
    sw->add_option("--jobs", cfg.jobs, "Worker threads");
    sw->add_option("--stop-after-blocks", cfg.stop_after_blocks, "Stop after this many 2^14 blocks (resume test)");
    std::string sw_config;
    sw->add_option("--config", sw_config, "JSON file of sweep settings; flags on the command line take precedence");
    sw->callback([&] {
        action = [&](const Printer& pr) {
            if (!sw_config.empty()) {
                // Keys mirror the flag names with '_' for '-'.
                const auto j = parse_json(read_file(sw_config));
                if (!j.is_object()) throw InvalidInput("sweep config must be a JSON object");
                const auto given = [&](const std::string& flag) {
                    const auto* opt = sw->get_option_no_throw("--" + flag);
                    return opt && opt->count() > 0;
                };
                try {
                    for (const auto& [key, v] : j.items()) {
                        std::string flag = key;
                        std::replace(flag.begin(), flag.end(), '_', '-');
                        if (given(flag)) continue;
                        if (key == "M") cfg.M = v.get<int64_t>();
                        else if (key == "row") sw_row = v.get<std::string>();
                        else if (key == "all_rows") sw_all = v.get<bool>();
                        else if (key == "range") sw_range = v.get<std::string>();
                        else if (key == "shard") sw_shard = v.get<std::string>();
                        else if (key == "delta") sw_delta = v.get<std::string>();
                        else if (key == "delta_preset") sw_preset = v.get<std::string>();
                        else if (key == "no_prescreen") sw_no_prescreen = v.get<bool>();
                        else if (key == "full_screen") cfg.full_screen = v.get<bool>();
                        else if (key == "jobs") cfg.jobs = v.get<unsigned>();
                        else if (key == "checkpoint") cfg.checkpoint_path = v.get<std::string>();
                        else if (key == "stop_after_blocks") cfg.stop_after_blocks = v.get<uint64_t>();
                        else if (key == "out") sw_out = v.get<std::string>();
                        else if (key == "violators") sw_viol = v.get<std::string>();
                        else if (key == "json") sw_json = v.get<std::string>();
                        else throw InvalidInput("unknown sweep config key '" + key + "'");
                    }
                } catch (const nlohmann::json::exception& e) {
                    throw InvalidInput(std::string("bad sweep config: ") + e.what());
                }
            }
            const Modulus mod(cfg.M);
            require_sweep_modulus(mod);
            if (sw_all == !sw_row.empty()) throw InvalidInput("give exactly one of --row and --all-rows");
            if (!sw_row.empty()) cfg.rows = {parse_row(mod, sw_row)};
            if (!sw_delta.empty() || !sw_preset.empty()) cfg.delta = pick_delta(mod, sw_delta, sw_preset, true);
            cfg.float_prescreen = !sw_no_prescreen;
            if (!sw_shard.empty()) {
                const auto slash = sw_shard.find('/');
                if (slash == std::string::npos) throw InvalidInput("--shard expects i/n");
                cfg.shard_index = static_cast<unsigned>(std::stoul(sw_shard.substr(0, slash)));
                cfg.shard_count = static_cast<unsigned>(std::stoul(sw_shard.substr(slash + 1)));
            }
            if (!sw_range.empty()) {
                const auto colon = sw_range.find(':');
                if (colon == std::string::npos) throw InvalidInput("--range expects begin:end");
                cfg.range_begin = std::stoull(sw_range.substr(0, colon));
                cfg.range_end = std::stoull(sw_range.substr(colon + 1));
                if (cfg.range_end <= cfg.range_begin) throw InvalidInput("--range end must exceed begin");
            }
            const auto outcome = run_sweep(cfg);
            if (!outcome.complete) {
                err << "stopped early; rerun with the same options to resume from " << cfg.checkpoint_path << '\n';
            }
            const std::string csv = rows_to_csv(outcome.rows);
            if (!sw_out.empty()) write_file(sw_out, csv);
            if (!sw_viol.empty()) write_file(sw_viol, violators_to_jsonl(outcome.rows));
            if (!sw_json.empty()) write_file(sw_json, rows_to_json(outcome.rows, cfg.M).dump() + "\n");
            for (const auto& r : outcome.rows) {
                err << r.label << ": " << r.passing << " passing, " << r.t2_violating << " violating (T2), "
                    << r.exact_solves << " exact screens";
                if (r.full_passing) err << ", " << *r.full_passing << " pass the full screen";
                err << '\n';
            }
            if (sw_out.empty()) {
                if (pr.format() == "json") pr.stream() << rows_to_json(outcome.rows, cfg.M).dump() << '\n';
                else pr.stream() << csv;
            }
            return kExitOk;
        };
    });

    // sweep-merge
    std::vector<std::string> mg_inputs;
    std::string mg_out, mg_viol, mg_json;
    auto* mg = app.add_subcommand("sweep-merge", "Merge shard results written by sweep --json");
    mg->add_option("inputs", mg_inputs, "Shard JSON files")->required();
    mg->add_option("--out", mg_out, "CSV output path (stdout if omitted)");
    mg->add_option("--violators", mg_viol, "JSON-lines output for violators");
    mg->add_option("--json", mg_json, "Merged result JSON");
    mg->callback([&] {
        action = [&](const Printer& pr) {
            std::vector<std::vector<SweepRow>> parts;
            int64_t M = 0;
            for (const auto& path : mg_inputs) {
                const auto j = parse_json(read_file(path));
                const auto m = j.value("M", int64_t{0});
                if (M && m != M) throw InvalidInput("shard files disagree on M");
                M = m;
                parts.push_back(rows_from_json(j));
            }
            const auto rows = merge_results(parts);
            const std::string csv = rows_to_csv(rows);
            if (!mg_out.empty()) write_file(mg_out, csv);
            if (!mg_viol.empty()) write_file(mg_viol, violators_to_jsonl(rows));
            if (!mg_json.empty()) write_file(mg_json, rows_to_json(rows, M).dump() + "\n");
            if (mg_out.empty()) {
                if (pr.format() == "json") pr.stream() << rows_to_json(rows, M).dump() << '\n';
                else pr.stream() << csv;
            }
            return kExitOk;
        };
    });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (!action) {
        err << "usage error: no subcommand\n";
        return kExitUsage;
    }
    try {
        return action(Printer(out, format));
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

}  // namespace zmtile::cli
