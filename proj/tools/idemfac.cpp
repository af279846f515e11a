#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <idemfac/cli.hpp>

using namespace idemfac;

namespace {

// CLI11 parses into strings; big integers go through parse_integer.
Integer arg(const std::string& s) { return parse_integer(s); }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Idempotent factorization of A(p, z) over quadratic integer rings"};
    app.require_subcommand(1);

    bool as_json = false;
    std::string D, p, z, N, cert, out_path, cert_dir, d_list, bound = "200", m = "0", p_max = "3", coord_max = "2";
    std::string cert_in;
    int jobs = 1;

    auto* ring = app.add_subcommand("ring", "ring basis and units of Z[√D]");
    ring->add_option("D", D, "square-free D")->required()->allow_extra_args(false);
    ring->add_flag("--json", as_json);

    auto add_target = [&](CLI::App* c) {
        c->add_option("D", D, "square-free D")->required();
        c->add_option("p", p, "rational prime")->required();
        c->add_option("z", z, "z as z1,z2[,den]")->required();
        c->add_flag("--json", as_json);
    };

    auto* classify = app.add_subcommand("classify", "prime status of p and membership z ∈ I_p(D)");
    add_target(classify);

    auto* conj = app.add_subcommand("conjecture", "decide the conjugate-pair factorization of A(p, z)");
    add_target(conj);
    conj->add_option("--m", m, "free parameter of the norm -p² construction");
    conj->add_option("--cert", cert, "write the certificate here on SATISFIED");

    auto* factor = app.add_subcommand("factor", "bounded search for any two-idempotent factorization");
    add_target(factor);
    factor->add_option("--bound", bound, "coordinate bound for b");
    factor->add_option("--cert", cert, "write the certificate here on SATISFIED");

    auto* verify = app.add_subcommand("verify", "check a certificate file");
    verify->add_option("certificate", cert_in, "certificate JSON")->required();
    verify->add_flag("--json", as_json);

    auto* pell = app.add_subcommand("pell", "solution classes of x² - Dy² = N");
    pell->add_option("D", D)->required();
    pell->add_option("N", N)->required();
    pell->add_flag("--json", as_json);

    auto* survey = app.add_subcommand("survey", "decide every well-formed A(p, z) in a box, CSV output");
    survey->add_option("--d-list", d_list, "comma-separated D values")->required();
    survey->add_option("--p-max", p_max, "largest prime p");
    survey->add_option("--coord-max", coord_max, "bound on |z1|, |z2|");
    survey->add_option("--out", out_path, "CSV path (default stdout)");
    survey->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    survey->add_option("--cert-dir", cert_dir, "directory for certificate files");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : cli::parse_error;
    }

    try {
        if (*ring) return cli::cmd_ring(arg(D), as_json, std::cout, std::cerr);
        if (*classify) return cli::cmd_classify(arg(D), arg(p), z, as_json, std::cout, std::cerr);
        if (*conj) return cli::cmd_conjecture(arg(D), arg(p), z, arg(m), as_json, cert, std::cout, std::cerr);
        if (*factor) return cli::cmd_factor(arg(D), arg(p), z, arg(bound), as_json, cert, std::cout, std::cerr);
        if (*verify) return cli::cmd_verify(cert_in, as_json, std::cout, std::cerr);
        if (*pell) return cli::cmd_pell(arg(D), arg(N), as_json, std::cout, std::cerr);
        if (*survey) {
            cli::SurveyOptions o;
            std::string item;
            std::stringstream ss(d_list);
            while (std::getline(ss, item, ','))
                if (!item.empty()) o.d_list.push_back(arg(item));
            o.p_max = arg(p_max);
            o.coord_max = arg(coord_max);
            o.jobs = jobs;
            o.cert_dir = cert_dir;
            return cli::cmd_survey(o, out_path, std::cout, std::cerr);
        }
    } catch (const error& e) {
        return cli::report_error(e, std::cerr);
    }
    return cli::parse_error;
}
