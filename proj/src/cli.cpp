#include "hroot/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "hroot/canonical.hpp"
#include "hroot/construction.hpp"
#include "hroot/errors.hpp"
#include "hroot/existence.hpp"
#include "hroot/io.hpp"
#include "hroot/verify.hpp"

namespace hroot {

namespace {

const char* command_name(Command c) {
    switch (c) {
        case Command::Decide: return "decide";
        case Command::Construct: return "construct";
        case Command::Verify: return "verify";
        case Command::Canonicalize: return "canonicalize";
        case Command::Oracle: return "oracle";
    }
    return "unknown";
}

Json read_input(const std::string& path) {
    try {
        if (path == "-") return Json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot read input file " + path);
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(std::string("input is not valid JSON: ") + e.what());
    }
}

int require_m(const JobSpec& job) {
    if (!job.m) throw InvalidInput("--m is required for " + std::string(command_name(job.command)));
    if (*job.m < 1) throw InvalidInput("m must be >= 1");
    return *job.m;
}

void render_text(const Json& j, std::ostream& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const Json& v = it.value();
        if (v.is_object()) {
            out << pad << it.key() << ":\n";
            render_text(v, out, indent + 2);
        } else if (v.is_array() && !v.empty() && v[0].is_array() && v[0].size() > 0 && v[0][0].is_array()) {
            out << pad << it.key() << ":\n";
            for (const auto& row : v) out << pad << "  " << row.dump() << "\n";
        } else if (v.is_array() && !v.empty() && v[0].is_object()) {
            out << pad << it.key() << ":\n";
            for (const auto& item : v) out << pad << "  - " << item.dump() << "\n";
        } else if (v.is_string()) {
            out << pad << it.key() << ": " << v.get<std::string>() << "\n";
        } else {
            out << pad << it.key() << ": " << v.dump() << "\n";
        }
    }
}

void emit(const JobSpec& job, Json report, std::ostream& out) {
    report["schema"] = kSchemaVersion;
    report["command"] = command_name(job.command);
    if (job.format == Format::Json)
        out << report.dump(2) << "\n";
    else
        render_text(report, out, 0);
}

// Canonical descriptor for either input form; raw pairs are canonicalized.
struct Prepared {
    Descriptor descriptor;
    std::optional<MatrixPair> raw;
    std::optional<CanonicalizationResult> canon;
};

Prepared prepare(const Json& input, double tol_canon) {
    Prepared p;
    if (is_descriptor_json(input)) {
        p.descriptor = descriptor_from_json(input);
    } else if (is_pair_json(input)) {
        p.raw = pair_from_json(input);
        p.canon = canonicalize(*p.raw, tol_canon);
        p.descriptor = p.canon->descriptor;
    } else {
        throw InvalidInput("input must be a descriptor {\"blocks\": [...]} or a pair {\"B\": ..., \"H\": ...}");
    }
    return p;
}

void describe_input(const Prepared& p, Json& report) {
    report["input"] = p.raw ? "pair" : "descriptor";
    if (p.canon)
        report["canonical"] = {{"descriptor", descriptor_to_json(p.canon->descriptor)},
                               {"residuals", {{"r_J", p.canon->r_J}, {"r_H", p.canon->r_H}}}};
}

int run_decide(const JobSpec& job, std::ostream& out) {
    const int m = require_m(job);
    const auto p = prepare(read_input(job.input), job.tol_canon);
    const auto report = decide(p.descriptor, m, job.tol_canon);
    Json j{{"m", m}, {"decision", decision_to_json(report)}};
    describe_input(p, j);
    emit(job, std::move(j), out);
    return report.exists ? kExitOk : kExitNegative;
}

int run_construct(const JobSpec& job, std::ostream& out, std::ostream& err) {
    const int m = require_m(job);
    const auto p = prepare(read_input(job.input), job.tol_canon);
    const auto report = decide(p.descriptor, m, job.tol_canon);
    Json j{{"m", m}, {"decision", decision_to_json(report)}};
    describe_input(p, j);
    if (!report.exists) {
        emit(job, std::move(j), out);
        return kExitNegative;
    }
    RootResult root = assemble_root(p.descriptor, m, report, job.tol_canon);
    MatrixPair target = realize(p.descriptor);
    if (p.raw) {
        root = transport(*p.raw, *p.canon, root);
        target = *p.raw;
    }
    const Json root_json = root_to_json(root);
    for (const auto& [key, value] : root_json.items()) j[key] = value;
    j["B"] = matrix_to_json(target.B);
    j["H"] = matrix_to_json(target.H);
    j["descriptor"] = descriptor_to_json(p.descriptor);
    j["root_descriptor"] = descriptor_to_json(root_descriptor(p.descriptor, *report.certificate));
    const bool pass = root.r_pow <= job.tol && root.r_sa <= job.tol;
    j["pass"] = pass;
    emit(job, std::move(j), out);
    if (!pass) {
        err << "error: constructed root misses the residual tolerance " << job.tol << " (r_pow=" << root.r_pow
            << ", r_sa=" << root.r_sa << ")\n";
        return kExitError;
    }
    return kExitOk;
}

int run_verify(const JobSpec& job, std::ostream& out) {
    const Json input = read_input(job.input);
    if (!input.is_object() || !input.contains("A") || !input.contains("B") || !input.contains("H"))
        throw InvalidInput("verify input needs \"A\", \"B\" and \"H\" matrices");
    int m = 0;
    if (job.m)
        m = *job.m;
    else if (input.contains("m") && input["m"].is_number_integer())
        m = input["m"].get<int>();
    else
        throw InvalidInput("m must be given with --m or as \"m\" in the input");
    if (m < 1) throw InvalidInput("m must be >= 1");
    const Matrix a = matrix_from_json(input["A"], "A");
    const Matrix b = matrix_from_json(input["B"], "B");
    const Matrix h = matrix_from_json(input["H"], "H");
    auto report = verify_root(a, b, h, m, job.tol);
    if (input.contains("S") && input.contains("descriptor")) {
        const Matrix s = matrix_from_json(input["S"], "S");
        const auto canonical = realize(descriptor_from_json(input["descriptor"]));
        if (s.rows() != b.rows() || s.cols() != b.cols() || canonical.B.rows() != b.rows())
            throw InvalidInput("S and descriptor must match the order of B");
        check_transition(report, {b, h}, canonical, s);
    }
    emit(job, {{"m", m}, {"tol", job.tol}, {"residuals", residuals_to_json(report)}, {"pass", report.pass}}, out);
    return report.pass ? kExitOk : kExitNegative;
}

int run_canonicalize(const JobSpec& job, std::ostream& out) {
    const Json input = read_input(job.input);
    MatrixPair pair;
    if (is_descriptor_json(input))
        pair = realize(descriptor_from_json(input));
    else
        pair = pair_from_json(input);
    const auto result = canonicalize(pair, job.tol_canon);
    const auto inertia = inertia_of(pair.H, job.tol_canon);
    Json j = canonicalization_to_json(result);
    j["inertia"] = {{"plus", inertia.plus}, {"minus", inertia.minus}, {"zero", inertia.zero}};
    emit(job, std::move(j), out);
    return kExitOk;
}

struct OracleVerdict {
    bool nilpotent = true;
    bool negative = true;
};

OracleVerdict oracle_verdict(const Descriptor& d, int m, double tol) {
    std::vector<int> sizes;
    std::map<int, int> positive;
    std::vector<NegativeBlock> negative;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
        const auto* r = std::get_if<RealBlock>(&d.blocks[i]);
        if (!r) continue;
        const auto cls = classify(r->eigenvalue, tol);
        if (cls == EigenClass::Zero) {
            sizes.push_back(r->size);
            if (r->sign > 0) ++positive[r->size];
        } else if (cls == EigenClass::Negative) {
            negative.push_back({i, r->eigenvalue, r->size, r->sign});
        }
    }
    OracleVerdict v;
    if (m > 1 && !sizes.empty()) v.nilpotent = oracle_decide_nilpotent(sizes, positive, m);
    v.negative = oracle_negative_even(negative, m, tol);
    return v;
}

Descriptor random_case(std::mt19937_64& rng) {
    Descriptor d;
    const int order = std::uniform_int_distribution<int>(1, 10)(rng);
    int left = order;
    std::bernoulli_distribution coin(0.5);
    while (left > 0) {
        const int size = std::uniform_int_distribution<int>(1, left)(rng);
        if (coin(rng)) {
            d.blocks.push_back(RealBlock{0.0, size, coin(rng) ? 1 : -1});
        } else {
            const double lambda = coin(rng) ? -1.0 : -2.0;
            d.blocks.push_back(RealBlock{lambda, size, coin(rng) ? 1 : -1});
        }
        left -= size;
    }
    return d;
}

int run_oracle(const JobSpec& job, std::ostream& out) {
    if (!job.input.empty()) {
        const int m = require_m(job);
        const auto p = prepare(read_input(job.input), job.tol_canon);
        const auto v = oracle_verdict(p.descriptor, m, job.tol_canon);
        const bool verdict = v.nilpotent && v.negative;
        const bool decided = decide(p.descriptor, m, job.tol_canon).exists;
        Json j{{"m", m},
               {"oracle", {{"nilpotent", v.nilpotent}, {"negative", v.negative}, {"exists", verdict}}},
               {"decide_agrees", decided == verdict}};
        describe_input(p, j);
        emit(job, std::move(j), out);
        if (decided != verdict) return kExitError;
        return verdict ? kExitOk : kExitNegative;
    }
    if (job.cases < 1) throw InvalidInput("--cases must be >= 1");
    std::mt19937_64 rng(job.seed);
    int mismatches = 0;
    Json first = nullptr;
    for (int c = 0; c < job.cases; ++c) {
        const Descriptor d = random_case(rng);
        const int m = job.m ? *job.m : std::uniform_int_distribution<int>(2, 4)(rng);
        const auto v = oracle_verdict(d, m, job.tol_canon);
        if (decide(d, m, job.tol_canon).exists != (v.nilpotent && v.negative)) {
            if (mismatches++ == 0) first = {{"m", m}, {"descriptor", descriptor_to_json(d)}};
        }
    }
    Json j{{"seed", job.seed}, {"cases", job.cases}, {"mismatches", mismatches}};
    if (mismatches) j["first_mismatch"] = first;
    emit(job, std::move(j), out);
    return mismatches ? kExitError : kExitOk;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    if (name == "decide") return Command::Decide;
    if (name == "construct") return Command::Construct;
    if (name == "verify") return Command::Verify;
    if (name == "canonicalize") return Command::Canonicalize;
    if (name == "oracle") return Command::Oracle;
    return std::nullopt;
}

std::optional<Format> parse_format(std::string_view name) {
    if (name == "json") return Format::Json;
    if (name == "text") return Format::Text;
    return std::nullopt;
}

int run(const JobSpec& job, std::ostream& out, std::ostream& err) {
    try {
        if (!(job.tol > 0.0) || !(job.tol_canon > 0.0)) throw InvalidInput("tolerances must be positive");
        if (job.input.empty() && job.command != Command::Oracle) throw InvalidInput("an input file is required");
        switch (job.command) {
            case Command::Decide: return run_decide(job, out);
            case Command::Construct: return run_construct(job, out, err);
            case Command::Verify: return run_verify(job, out);
            case Command::Canonicalize: return run_canonicalize(job, out);
            case Command::Oracle: return run_oracle(job, out);
        }
    } catch (const InvalidInput& e) {
        err << "error: invalid input: " << e.what() << "\n";
    } catch (const IllConditioned& e) {
        err << "error: ill-conditioned: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const Json::exception& e) {
        err << "error: invalid input: " << e.what() << "\n";
    }
    return kExitError;
}

}  // namespace hroot
