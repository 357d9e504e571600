#pragma once

#include "fock.hpp"
#include "io.hpp"
#include "partition.hpp"
#include "random.hpp"
#include "transforms.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace mulfs::cli {

enum ExitCode : int { ok = 0, verification_failed = 1, usage_error = 2, singular = 3 };

namespace detail {

struct UsageError : Error {
    explicit UsageError(const std::string& what) : Error("UsageError", what) {}
};

inline std::string read_input(const std::string& path, std::istream& in)
{
    std::ostringstream buf;
    if (path == "-") {
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path);
    if (!file) throw UsageError("cannot read " + path);
    buf << file.rdbuf();
    return buf.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path);
    if (!file) throw UsageError("cannot write " + path);
    file << text;
}

inline MFSeries load_series(const std::string& path, std::istream& in)
{
    return io::series_from_json(io::parse(read_input(path, in), path), path == "-" ? "$" : path);
}

inline PartitionMode parse_mode(const std::string& mode)
{
    if (mode == "nc") return PartitionMode::nc;
    if (mode == "ip") return PartitionMode::ip;
    return PartitionMode::ncl;
}

struct Check {
    std::string identity;
    int trial;
    int order;
    bool pass;
};

// Dual-path checks on random series: partition sums against the Fock model, transform
// plug-backs and round trips, and the two convolution laws.
inline std::vector<Check> oracle_checks(int order, const std::string& dim_kind, std::uint64_t seed, int trials)
{
    const AlgebraDescriptor desc = dim_kind == "scalar" ? AlgebraDescriptor::scalar() : AlgebraDescriptor::matrix(2);
    const int product_order = dim_kind == "scalar" ? order : std::min(order, 2);
    const FockSpace space{desc, 2};
    RandomSource rng(seed);
    std::vector<Check> checks;
    using C = RandomSource::Constant;
    for (int trial = 0; trial < trials; ++trial) {
        auto record = [&](std::string name, int n, bool pass) { checks.push_back({std::move(name), trial, n, pass}); };

        const MFSeries ra = rng.series(desc, order), rb = rng.series(desc, order);
        const FockOperator x = additive_canonical(space, 1, ra), y = additive_canonical(space, 2, rb);
        const MFSeries bx = distribution_series(x, order), by = distribution_series(y, order);
        record("moments-from-r-vs-fock", order, bx == moments_from_r(ra, order));
        const MFSeries rtx = r_transform(bx);
        record("r-transform-characterization", order, r_characterization_holds(bx, rtx));
        record("r-transform-round-trip", order, rtx == ra && r_transform(r_inverse(rb, order)) == rb);
        const MFSeries bsum = distribution_series(x + y, order);
        record("r-transform-additivity", order, r_transform(bsum) == ra + rb);
        record("free-additive-convolution-vs-fock", order, free_additive_convolution(bx, by, order) == bsum);

        const MFSeries ta = rng.series(desc, order, C::unit), tb = rng.series(desc, order, C::invertible);
        const FockOperator u = multiplicative_canonical(space, 1, ta), v = multiplicative_canonical(space, 2, tb);
        const MFSeries bu = distribution_series(u, order);
        record("moments-from-t-vs-fock", order, bu == moments_from_t(ta, order));
        const MFSeries ttu = t_transform(bu);
        record("t-transform-characterization", order, t_characterization_holds(bu, ttu));
        record("t-transform-round-trip", order, ttu == ta && t_transform(t_inverse(tb, order)) == tb);

        const MFSeries pa = ta.truncated(product_order), pb = tb.truncated(product_order);
        const std::vector<FockOperator> factors{multiplicative_canonical(space, 1, pa), multiplicative_canonical(space, 2, pb)};
        const MFSeries bprod = distribution_series(factors, product_order);
        record("t-transform-twisted-multiplicativity", product_order, t_transform(bprod) == twisted_t_product(pa, pb));
        const MFSeries bu2 = bu.truncated(product_order), bv2 = distribution_series(multiplicative_canonical(space, 2, pb), product_order);
        record("free-multiplicative-convolution-vs-fock", product_order,
               free_multiplicative_convolution(bu2, bv2, product_order) == bprod);
    }
    return checks;
}

} // namespace detail

// Runs one command; args excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multilinear function series, linked partitions and operator-valued free transforms"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    auto* ncl = app.add_subcommand("ncl", "Noncrossing linked partitions");
    ncl->require_subcommand(1);
    int n = 0;
    std::string mode = "ncl", format = "text";
    bool csv = false;
    auto* count = ncl->add_subcommand("count", "Number of partitions of {1..n}");
    count->add_option("--n", n, "ground set size")->required();
    count->add_option("--mode", mode, "ncl, nc or ip")->check(CLI::IsMember({"ncl", "nc", "ip"}));
    count->add_flag("--csv", csv, "print a table n,count for 1..n");
    auto* enumerate_cmd = ncl->add_subcommand("enumerate", "List partitions in canonical order");
    enumerate_cmd->add_option("--n", n, "ground set size")->required();
    enumerate_cmd->add_option("--mode", mode, "ncl, nc or ip")->check(CLI::IsMember({"ncl", "nc", "ip"}));
    enumerate_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    int max_n = 0;
    auto* verify = ncl->add_subcommand("verify", "Check counting identities and bijections");
    verify->add_option("--max-n", max_n, "largest ground set")->required();

    std::string in_path, out_path;
    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--in", in_path, "input series JSON, - for stdin")->required();
        cmd->add_option("--out", out_path, "output file, stdout when omitted");
    };
    auto* rtransform = app.add_subcommand("rtransform", "R-transform of a distribution series");
    add_io(rtransform);
    auto* ttransform = app.add_subcommand("ttransform", "T-transform of a distribution series");
    add_io(ttransform);
    auto* stransform = app.add_subcommand("stransform", "S-transform of a distribution series");
    add_io(stransform);

    std::string transform = "r";
    int order = 0;
    auto* moments = app.add_subcommand("moments", "Distribution series from a transform");
    add_io(moments);
    moments->add_option("--transform", transform, "r or t")->required()->check(CLI::IsMember({"r", "t"}));
    moments->add_option("--order", order, "truncation order")->required()->check(CLI::NonNegativeNumber);

    std::string kind, a_path, b_path;
    auto* convolve = app.add_subcommand("convolve", "Free additive or multiplicative convolution");
    convolve->add_option("--kind", kind, "add or mul")->required()->check(CLI::IsMember({"add", "mul"}));
    convolve->add_option("--a", a_path, "first distribution series")->required();
    convolve->add_option("--b", b_path, "second distribution series")->required();
    convolve->add_option("--order", order, "truncation order")->required()->check(CLI::NonNegativeNumber);
    convolve->add_option("--out", out_path, "output file, stdout when omitted");

    std::string dim_kind = "matrix2";
    std::uint64_t seed = 1;
    int trials = 5;
    auto* oracle = app.add_subcommand("oracle-check", "Random dual-path identity suite");
    oracle->add_option("--order", order, "truncation order")->required()->check(CLI::Range(0, 4));
    oracle->add_option("--dim-kind", dim_kind, "scalar or matrix2")->check(CLI::IsMember({"scalar", "matrix2"}));
    oracle->add_option("--seed", seed, "random seed");
    oracle->add_option("--trials", trials, "number of random trials")->check(CLI::PositiveNumber);

    auto report_error = [&](const std::string& kind_name, const std::string& message, int code) {
        err << io::dump(io::Json{{"error", kind_name}, {"message", message}});
        return code;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        return report_error("UsageError", e.what(), usage_error);
    }

    try {
        if (count->parsed()) {
            const auto m = detail::parse_mode(mode);
            if (csv) {
                std::string text = "n,count\n";
                for (int k = 1; k <= n; ++k) text += std::to_string(k) + "," + std::to_string(count_partitions(k, m)) + "\n";
                out << text;
            } else {
                out << count_partitions(n, m) << "\n";
            }
            return ok;
        }
        if (enumerate_cmd->parsed()) {
            const auto list = enumerate(n, detail::parse_mode(mode));
            if (format == "json") {
                io::Json arr = io::Json::array();
                for (const auto& p : list) arr.push_back(io::to_json(p));
                out << io::dump(arr);
            } else {
                std::string text;
                for (const auto& p : list) text += to_string(p) + "\n";
                out << text;
            }
            return ok;
        }
        if (verify->parsed()) {
            io::Json checks = io::Json::array();
            bool all = true;
            for (const auto& c : schroder_identities(max_n)) {
                checks.push_back(io::to_json(c));
                all = all && c.pass;
            }
            auto add = [&](const std::string& name, int k, bool pass) {
                checks.push_back(io::Json{{"identity", name}, {"n", k}, {"pass", pass}});
                all = all && pass;
            };
            for (int k = 1; k <= std::min(max_n, 8); ++k) {
                bool encode = true, dc = true, bijection = true;
                std::size_t fiber = 0;
                for (const auto& p : enumerate(k, PartitionMode::ncl)) {
                    encode = encode && s_decode(s_encode(p)) == p;
                    if (k >= 2) dc = dc && compose_dc(decompose_dc(p)) == p;
                    if (k >= 2 && generated_nc(p) == full_partition(k)) {
                        ++fiber;
                        bijection = bijection && ncl1_v(ncl1_u(p)) == p;
                    }
                }
                if (k >= 2) {
                    for (const auto& t : enumerate(k - 1, PartitionMode::nc)) bijection = bijection && ncl1_u(ncl1_v(t)) == t;
                    bijection = bijection && Integer(std::to_string(fiber)) == catalan(k - 1);
                }
                add("s-encoding-round-trip", k, encode);
                add("decomposition-round-trip", k, dc);
                add("ncl1-bijection", k, bijection);
            }
            out << io::dump(io::Json{{"checks", checks}, {"pass", all}});
            return all ? ok : verification_failed;
        }
        if (rtransform->parsed() || ttransform->parsed() || stransform->parsed()) {
            const MFSeries beta = detail::load_series(in_path, in);
            const MFSeries result = rtransform->parsed() ? r_transform(beta) : ttransform->parsed() ? t_transform(beta) : s_transform(beta);
            detail::write_output(out_path, io::dump(io::to_json(result)), out);
            return ok;
        }
        if (moments->parsed()) {
            const MFSeries alpha = detail::load_series(in_path, in);
            const MFSeries result = transform == "r" ? moments_from_r(alpha, order) : moments_from_t(alpha, order);
            detail::write_output(out_path, io::dump(io::to_json(result)), out);
            return ok;
        }
        if (convolve->parsed()) {
            const MFSeries a = detail::load_series(a_path, in), b = detail::load_series(b_path, in);
            const MFSeries result =
                kind == "add" ? free_additive_convolution(a, b, order) : free_multiplicative_convolution(a, b, order);
            detail::write_output(out_path, io::dump(io::to_json(result)), out);
            return ok;
        }
        if (oracle->parsed()) {
            io::Json checks = io::Json::array();
            bool all = true;
            for (const auto& c : detail::oracle_checks(order, dim_kind, seed, trials)) {
                checks.push_back(io::Json{{"identity", c.identity}, {"trial", c.trial}, {"order", c.order}, {"pass", c.pass}});
                all = all && c.pass;
            }
            out << io::dump(io::Json{{"checks", checks}, {"dim_kind", dim_kind}, {"order", order}, {"pass", all}, {"seed", seed}});
            return all ? ok : verification_failed;
        }
    } catch (const SingularError& e) {
        return report_error(e.kind(), e.what(), singular);
    } catch (const NotCompInvertible& e) {
        return report_error(e.kind(), e.what(), singular);
    } catch (const CapExceeded& e) {
        return report_error(e.kind(), e.what(), singular);
    } catch (const Error& e) {
        return report_error(e.kind(), e.what(), usage_error);
    }
    return report_error("UsageError", "no command given", usage_error);
}

inline int run(int argc, char** argv)
{
    return run(std::vector<std::string>(argv + 1, argv + argc), std::cin, std::cout, std::cerr);
}

} // namespace mulfs::cli
