#include "CLI11.hpp"

#include "chc/consat.hpp"
#include "chc/driver.hpp"
#include "chc/evaluator.hpp"
#include "chc/modelcheck.hpp"
#include "chc/parser.hpp"
#include "chc/smtlib.hpp"
#include "chc/variant.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// numbered listing used when writing or debugging transformation scripts
std::string annotated_listing(const chc::Program& p) {
    std::ostringstream os;
    for (auto& c : p.clauses) {
        os << c.id << ". " << chc::clause_to_string(c) << "\n";
        auto atoms = c.atoms();
        if (!atoms.empty()) {
            os << "      atoms:";
            for (size_t i = 0; i < atoms.size(); i++)
                os << " [" << i + 1 << "] " << chc::atom_to_string(*atoms[i]);
            os << "\n";
        }
        auto cs = c.constraints();
        if (!cs.empty()) {
            os << "      constraints:";
            for (size_t i = 0; i < cs.size(); i++)
                os << " [c" << i + 1 << "] " << chc::constraint_to_string(*cs[i]);
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chc: transform constrained Horn clauses over integer lists into "
                 "list-free clauses, evaluate them over small universes, and check "
                 "candidate models"};
    app.require_subcommand(1);

    std::string file, file2, out, hints_path, model_path, script_path, solver_cmd;
    long long box_lo = -3, box_hi = 3;
    long long int_lo = 0, int_hi = 2;
    int max_len = 3, budget = 500, timeout_s = 120;
    bool dump = false, strict_universe = false;

    auto* cmd_parse = app.add_subcommand("parse", "parse a clause file and report diagnostics");
    cmd_parse->add_option("file", file)->required();

    auto* cmd_transform =
        app.add_subcommand("transform", "run the elimination driver on a clause file");
    cmd_transform->add_option("file", file)->required();
    cmd_transform->add_option("--hints", hints_path, "hint script to follow");
    cmd_transform->add_option("--budget", budget, "rule application budget");
    cmd_transform->add_option("--out", out, "write the transformed program here");
    std::string trace_out;
    cmd_transform->add_option("--trace", trace_out, "write the realized trace here");

    auto* cmd_replay = app.add_subcommand("replay", "apply a transformation script");
    cmd_replay->add_option("file", file)->required();
    cmd_replay->add_option("script", script_path)->required();
    cmd_replay->add_option("--out", out);

    auto* cmd_state = app.add_subcommand(
        "state", "apply a script (possibly empty) and print the numbered clause listing");
    cmd_state->add_option("file", file)->required();
    cmd_state->add_option("--script", script_path);

    auto* cmd_emit = app.add_subcommand("emit", "write the SMT-LIB rendering");
    cmd_emit->add_option("file", file)->required();
    cmd_emit->add_option("--out", out);

    auto* cmd_check = app.add_subcommand("check-model", "validate a model against clauses");
    cmd_check->add_option("clauses", file)->required();
    cmd_check->add_option("model", model_path)->required();
    cmd_check->add_option("--box-lo", box_lo);
    cmd_check->add_option("--box-hi", box_hi);

    auto* cmd_eval = app.add_subcommand("eval", "bounded least-model evaluation");
    cmd_eval->add_option("file", file)->required();
    cmd_eval->add_option("--int-lo", int_lo);
    cmd_eval->add_option("--int-hi", int_hi);
    cmd_eval->add_option("--max-len", max_len);
    cmd_eval->add_flag("--dump", dump, "print the model's tuples");
    cmd_eval->add_flag("--strict-universe", strict_universe,
                       "fail when a clause constant falls outside the range");

    auto* cmd_compare = app.add_subcommand("compare", "compare bounded verdicts of two files");
    cmd_compare->add_option("file1", file)->required();
    cmd_compare->add_option("file2", file2)->required();
    cmd_compare->add_option("--int-lo", int_lo);
    cmd_compare->add_option("--int-hi", int_hi);
    cmd_compare->add_option("--max-len", max_len);

    auto* cmd_variant =
        app.add_subcommand("variant", "check two files for equivalence up to renaming");
    cmd_variant->add_option("file1", file)->required();
    cmd_variant->add_option("file2", file2)->required();

    auto* cmd_solve = app.add_subcommand("solve", "emit SMT-LIB and run an external solver");
    cmd_solve->add_option("file", file)->required();
    cmd_solve->add_option("--solver-cmd", solver_cmd,
                          "command template; {file} is replaced by the script path "
                          "(default: $CHC_SOLVER_CMD)");
    cmd_solve->add_option("--timeout", timeout_s, "wall clock limit in seconds");
    cmd_solve->add_option("--out", out, "where to write the SMT-LIB file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_parse->parsed()) {
            auto p = chc::parse_program(slurp(file));
            std::cout << "ok: " << p.decls.size() << " declarations, " << p.clauses.size()
                      << " clauses\n";
            return 0;
        }
        if (cmd_transform->parsed()) {
            auto p = chc::parse_program(slurp(file));
            std::vector<chc::Step> steps;
            if (!hints_path.empty()) steps = chc::parse_script(slurp(hints_path), p);
            auto r = chc::eliminate(p, budget, hints_path.empty() ? nullptr : &steps);
            std::string text = chc::print_program(r.program);
            if (out.empty())
                std::cout << text;
            else
                spit(out, text);
            if (!trace_out.empty()) {
                std::string t;
                for (auto& line : r.trace) t += line + "\n";
                spit(trace_out, t);
            }
            switch (r.status) {
                case chc::ElimStatus::Success:
                    std::cerr << "success: list-free program with " << r.program.clauses.size()
                              << " clauses\n";
                    return 0;
                case chc::ElimStatus::BudgetExhausted:
                    std::cerr << "budget exhausted\n";
                    return 1;
                case chc::ElimStatus::Stuck:
                    std::cerr << "stuck at clause " << r.blocking_clause << ": " << r.message
                              << "\n";
                    return 1;
            }
        }
        if (cmd_replay->parsed() || cmd_state->parsed()) {
            auto p = chc::parse_program(slurp(file));
            std::vector<chc::Step> steps;
            if (!script_path.empty()) steps = chc::parse_script(slurp(script_path), p);
            auto ses = chc::replay(p, steps);
            if (cmd_state->parsed()) {
                std::cout << annotated_listing(ses.prog);
                return 0;
            }
            std::string text = chc::print_program(ses.prog);
            if (out.empty())
                std::cout << text;
            else
                spit(out, text);
            return 0;
        }
        if (cmd_emit->parsed()) {
            auto p = chc::parse_program(slurp(file));
            std::string text = chc::emit_smtlib(p);
            if (out.empty())
                std::cout << text;
            else
                spit(out, text);
            return 0;
        }
        if (cmd_check->parsed()) {
            auto p = chc::parse_program(slurp(file));
            auto m = chc::parse_model(slurp(model_path));
            chc::Box box{box_lo, box_hi};
            auto r = chc::check_model(p, m, box, false);
            for (auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
            if (r.valid) {
                std::cout << "valid\n";
                return 0;
            }
            std::cout << "counterexample at " << r.cex->to_string(p) << "\n";
            return 1;
        }
        if (cmd_eval->parsed()) {
            auto p = chc::parse_program(slurp(file));
            chc::Universe u;
            u.int_lo = int_lo;
            u.int_hi = int_hi;
            u.max_list_len = max_len;
            if (strict_universe) chc::least_model(p, u, true);
            auto r = chc::bounded_sat(p, u);
            if (dump) {
                for (auto& [pred, rel] : r.model.rels) {
                    const chc::PredDecl* d = p.find_decl(pred);
                    for (auto& t : rel) {
                        std::cout << pred << "(";
                        for (size_t i = 0; i < t.size(); i++) {
                            if (i) std::cout << ",";
                            chc::Sort s = d ? d->arg_sorts[i] : chc::Sort::Int;
                            if (s == chc::Sort::List)
                                std::cout << r.model.lists.to_string((int)t[i]);
                            else if (s == chc::Sort::Bool)
                                std::cout << (t[i] ? "true" : "false");
                            else
                                std::cout << t[i];
                        }
                        std::cout << ")\n";
                    }
                }
            }
            if (!r.false_derived) {
                std::cout << "no false derivation\n";
                return 0;
            }
            std::cout << "false derived:\n" << chc::witness_to_string(*r.witness, p);
            return 1;
        }
        if (cmd_compare->parsed()) {
            auto p1 = chc::parse_program(slurp(file));
            auto p2 = chc::parse_program(slurp(file2));
            chc::Universe u;
            u.int_lo = int_lo;
            u.int_hi = int_hi;
            u.max_list_len = max_len;
            auto r = chc::compare_programs(p1, p2, u);
            auto verdict = [](const chc::BoundedResult& b) {
                return b.false_derived ? "false derived" : "no false derivation";
            };
            if (r.verdict == chc::CompareVerdict::Agree) {
                std::cout << "agree: " << verdict(r.left) << "\n";
                return 0;
            }
            std::cout << "disagree: left " << verdict(r.left) << ", right "
                      << verdict(r.right) << "\n";
            if (r.left.witness) std::cout << chc::witness_to_string(*r.left.witness, p1);
            if (r.right.witness) std::cout << chc::witness_to_string(*r.right.witness, p2);
            return 1;
        }
        if (cmd_variant->parsed()) {
            auto p1 = chc::parse_program(slurp(file));
            auto p2 = chc::parse_program(slurp(file2));
            std::map<std::string, std::string> pm;
            if (chc::program_variant_equal(p1, p2, &pm)) {
                std::cout << "equivalent";
                for (auto& [a, b] : pm)
                    if (a != b) std::cout << " " << a << "->" << b;
                std::cout << "\n";
                return 0;
            }
            std::cout << "not equivalent\n" << chc::variant_diff_report(p1, p2);
            return 1;
        }
        if (cmd_solve->parsed()) {
            auto p = chc::parse_program(slurp(file));
            std::string smt = chc::emit_smtlib(p);
            std::string smt_path = out.empty() ? file + ".smt2" : out;
            spit(smt_path, smt);
            if (solver_cmd.empty()) {
                const char* env = std::getenv("CHC_SOLVER_CMD");
                if (env) solver_cmd = env;
            }
            if (solver_cmd.empty()) {
                std::cerr << "no solver command (use --solver-cmd or CHC_SOLVER_CMD); "
                             "SMT-LIB written to "
                          << smt_path << "\n";
                return 3;
            }
            auto pos = solver_cmd.find("{file}");
            if (pos != std::string::npos)
                solver_cmd.replace(pos, 6, smt_path);
            else
                solver_cmd += " " + smt_path;
            std::string full = "timeout " + std::to_string(timeout_s) + " " + solver_cmd;
            FILE* pipe = popen(full.c_str(), "r");
            if (!pipe) {
                std::cerr << "failed to start solver\n";
                return 3;
            }
            std::string output;
            char buf[4096];
            size_t n;
            while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, n);
            int rc = pclose(pipe);
            if (rc == 124 * 256) {  // timeout(1) convention
                std::cout << "timeout after " << timeout_s << " s\n";
                return 3;
            }
            std::cout << output;
            if (output.rfind("sat", 0) == 0) {
                try {
                    auto m = chc::parse_model(output.substr(output.find('\n') + 1));
                    std::cerr << "parsed model with " << m.entries.size() << " entries\n";
                } catch (const std::exception&) {
                    std::cerr << "solver output kept verbatim (not in Prolog model format)\n";
                }
                return 0;
            }
            if (output.rfind("unsat", 0) == 0) return 1;
            return 3;
        }
    } catch (const chc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
