#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hroot/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"H-selfadjoint m-th roots: decide, construct, verify, canonicalize"};
    app.require_subcommand(1);

    hroot::JobSpec job;
    std::string format = "json";
    std::optional<int> m;

    auto add = [&](const std::string& name, const std::string& help, bool input_required) {
        auto* sub = app.add_subcommand(name, help);
        auto* in = sub->add_option("input", job.input, "JSON input file, or - for stdin");
        if (input_required) in->required();
        sub->add_option("--m", m, "root order m >= 1");
        sub->add_option("--tol", job.tol, "residual tolerance")->capture_default_str();
        sub->add_option("--tol-canon", job.tol_canon, "rank and clustering tolerance")->capture_default_str();
        sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
        return sub;
    };
    add("decide", "decide whether an H-selfadjoint m-th root exists", true);
    add("construct", "construct an H-selfadjoint m-th root", true);
    add("verify", "check residuals of a candidate root (A, B, H, m)", true);
    add("canonicalize", "reduce a pair (B, H) to canonical form", true);
    auto* oracle = add("oracle", "brute-force existence check, or a seeded sweep when no input is given", false);
    oracle->add_option("--seed", job.seed, "sweep seed")->capture_default_str();
    oracle->add_option("--cases", job.cases, "sweep size")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    job.command = *hroot::parse_command(app.get_subcommands().front()->get_name());
    job.format = *hroot::parse_format(format);
    job.m = m;
    return hroot::run(job, std::cout, std::cerr);
}
