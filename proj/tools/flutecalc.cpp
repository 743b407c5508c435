// Command line front end for the arc-code engine: reduction, shift images,
// orbit iteration, loop checks, lanes, intersections, pairings, train-track
// data. Codes are read from arguments or stdin, one per line.
#include <CLI11.hpp>
#include <json.hpp>

#include "flute/family.hpp"
#include "flute/geometry.hpp"
#include "flute/shift.hpp"
#include "flute/traintrack.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using json = nlohmann::json;
using namespace flute;

namespace {

struct Options {
    bool json_out = false;
    std::size_t max_tokens = 10'000'000;
};

std::vector<std::string> read_inputs(const std::vector<std::string>& args) {
    if (!args.empty()) return args;
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(std::cin, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

void emit(const Options& opt, const std::string& key, const std::string& value) {
    if (opt.json_out)
        std::cout << json{{key, value}}.dump() << '\n';
    else
        std::cout << value << '\n';
}

ShiftSpec shift_from_name(const std::string& name) {
    if (name == "h1") return family_shift(FamilyKind::H1);
    auto colon = name.find(':');
    if (colon != std::string::npos) {
        std::string head = name.substr(0, colon);
        int n = std::stoi(name.substr(colon + 1));
        if (head == "h2") return family_shift(FamilyKind::H2, n);
        if (head == "h3") return family_shift(FamilyKind::H3, n);
        if (head == "g") throw shift_error("g is a composition; use apply --shift g:n");
    }
    throw shift_error("unknown shift name: " + name);
}

// g:n handled separately from single shifts
struct ShiftArg {
    bool is_g = false;
    int n = 1;
    std::optional<ShiftSpec> spec;
};

ShiftArg parse_shift_arg(const std::string& name, const std::string& file) {
    ShiftArg s;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw shift_error("cannot open shift file: " + file);
        std::stringstream ss;
        ss << in.rdbuf();
        s.spec = parse_shift(ss.str());
        return s;
    }
    if (name.rfind("g:", 0) == 0) {
        s.is_g = true;
        s.n = std::stoi(name.substr(2));
        return s;
    }
    s.spec = shift_from_name(name);
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"arc code calculus on the biinfinite flute surface"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--json", opt.json_out, "structured JSON output");
    app.add_option("--max-tokens", opt.max_tokens, "token cap for orbit computations");

    std::vector<std::string> codes;
    std::string shift_name = "h1", shift_file;
    std::int64_t power = 1, nval = 1, steps = 0, ival = 0;
    bool eigen = false, dump = false;

    auto* reduce_cmd = app.add_subcommand("reduce", "reduce codes");
    reduce_cmd->add_option("codes", codes);

    auto* apply_cmd = app.add_subcommand("apply", "apply a shift or g");
    apply_cmd->add_option("--shift", shift_name, "h1 | h2:n | h3:n | g:n");
    apply_cmd->add_option("--shift-file", shift_file, "shift record file");
    apply_cmd->add_option("--power", power, "iterate (negative for inverse)");
    apply_cmd->add_option("codes", codes);

    auto* iterate_cmd = app.add_subcommand("iterate", "emit the alpha orbit");
    iterate_cmd->add_option("--n", nval)->required();
    iterate_cmd->add_option("--steps", steps)->required();

    auto* beta_cmd = app.add_subcommand("beta", "emit the beta orbit");
    beta_cmd->add_option("--n", nval)->required();
    beta_cmd->add_option("--steps", steps)->required();

    auto* phi_cmd = app.add_subcommand("phi", "starts-like index");
    phi_cmd->add_option("--n", nval)->required();
    phi_cmd->add_option("codes", codes);

    auto* loop_cmd = app.add_subcommand("loop-check", "loop triviality verdicts");
    loop_cmd->add_option("--shift", shift_name);
    loop_cmd->add_option("--shift-file", shift_file);
    loop_cmd->add_option("codes", codes);

    auto* lanes_cmd = app.add_subcommand("lanes", "lane extraction");
    lanes_cmd->add_option("codes", codes);

    auto* highway_cmd = app.add_subcommand("highway", "highway check for alpha_i");
    highway_cmd->add_option("--n", nval)->required();
    highway_cmd->add_option("--i", ival)->required();

    auto* intersect_cmd = app.add_subcommand("intersect", "geometric intersection number");
    intersect_cmd->add_option("codes", codes);
    intersect_cmd->add_flag("--dump", dump, "dump strand positions");

    auto* pairing_cmd = app.add_subcommand("pairing", "signed pairing of symmetric arcs");
    pairing_cmd->add_option("codes", codes);

    auto* theta_cmd = app.add_subcommand("theta", "train track code of the closed curve");
    theta_cmd->add_option("codes", codes);

    auto* matrix_cmd = app.add_subcommand("matrix", "transition matrix");
    matrix_cmd->add_option("--n", nval)->required();
    matrix_cmd->add_flag("--eigenvalue", eigen);

    CLI11_PARSE(app, argc, argv);
    set_max_tokens(opt.max_tokens);

    try {
        if (reduce_cmd->parsed()) {
            for (const auto& text : read_inputs(codes))
                emit(opt, "code", format_code(reduce(parse_auto(text))));
        } else if (apply_cmd->parsed()) {
            ShiftArg s = parse_shift_arg(shift_name, shift_file);
            for (const auto& text : read_inputs(codes)) {
                Code c = reduce(parse_auto(text));
                Code r = c;
                if (s.is_g) {
                    r = apply_g(s.n, c, power);
                } else {
                    for (std::int64_t k = 0; k < power; ++k) r = apply_shift(*s.spec, r);
                    for (std::int64_t k = 0; k > power; --k) r = apply_inverse(*s.spec, r);
                }
                emit(opt, "code", format_code(r));
            }
        } else if (iterate_cmd->parsed()) {
            for (std::int64_t i = 0; i <= steps; ++i)
                emit(opt, "code", format_code(alpha_arc(static_cast<int>(nval), i)));
        } else if (beta_cmd->parsed()) {
            for (std::int64_t i = 0; i <= steps; ++i)
                emit(opt, "code", format_code(beta_arc(static_cast<int>(nval), i)));
        } else if (phi_cmd->parsed()) {
            for (const auto& text : read_inputs(codes)) {
                auto v = phi_starts_like(static_cast<int>(nval), reduce(parse_auto(text)));
                if (opt.json_out)
                    std::cout << json{{"phi", v}}.dump() << '\n';
                else
                    std::cout << v << '\n';
            }
        } else if (loop_cmd->parsed()) {
            ShiftArg s = parse_shift_arg(shift_name, shift_file);
            if (s.is_g) throw shift_error("loop-check needs a single shift");
            for (const auto& text : read_inputs(codes)) {
                Code c = parse_code(text, Flavor::Segment);
                bool direct = loop_is_trivial_direct(*s.spec, c);
                bool closed = loop_theorem_form(*s.spec, c);
                if (opt.json_out)
                    std::cout << json{{"direct", direct}, {"closed_form", closed}}.dump()
                              << '\n';
                else
                    std::cout << (direct ? "trivial" : "nontrivial") << ' '
                              << (closed ? "matches-form" : "no-form") << '\n';
            }
        } else if (lanes_cmd->parsed()) {
            for (const auto& text : read_inputs(codes)) {
                auto lanes = find_lanes(reduce(parse_auto(text)));
                if (opt.json_out) {
                    json arr = json::array();
                    for (const auto& l : lanes)
                        arr.push_back({{"side", l.side == LaneSide::Left ? "left" : "right"},
                                       {"tokens", format_code(l.tokens)},
                                       {"length", l.lane_length},
                                       {"innermost", l.innermost}});
                    std::cout << arr.dump() << '\n';
                } else {
                    for (const auto& l : lanes)
                        std::cout << (l.side == LaneSide::Left ? "left " : "right ")
                                  << l.lane_length << (l.innermost ? " innermost " : " ")
                                  << format_code(l.tokens) << '\n';
                }
            }
        } else if (highway_cmd->parsed()) {
            bool ok = highway_check(static_cast<int>(nval), ival);
            emit(opt, "highway", ok ? "true" : "false");
            if (!ok) return 1;
        } else if (intersect_cmd->parsed()) {
            auto inputs = read_inputs(codes);
            if (inputs.size() != 2) throw code_error("intersect needs exactly two codes");
            Code a = reduce(parse_auto(inputs[0])), b = reduce(parse_auto(inputs[1]));
            if (dump) {
                auto w = realize_front({a, b});
                std::cout << dump_strands(w);
            }
            auto v = intersection_number(a, b);
            if (opt.json_out)
                std::cout << json{{"intersections", v}}.dump() << '\n';
            else
                std::cout << v << '\n';
        } else if (pairing_cmd->parsed()) {
            auto inputs = read_inputs(codes);
            if (inputs.size() != 2) throw code_error("pairing needs exactly two codes");
            auto p = pairing(reduce(parse_auto(inputs[0])), reduce(parse_auto(inputs[1])));
            if (opt.json_out)
                std::cout << json{{"i_plus", p.i_plus}, {"i_minus", p.i_minus}}.dump() << '\n';
            else
                std::cout << "i_plus " << p.i_plus << " i_minus " << p.i_minus << '\n';
        } else if (theta_cmd->parsed()) {
            for (const auto& text : read_inputs(codes)) {
                auto t = theta_encode(to_curve(reduce(parse_auto(text))));
                emit(opt, "theta", format_theta(t));
            }
        } else if (matrix_cmd->parsed()) {
            auto m = transition_matrix(static_cast<int>(nval));
            if (opt.json_out) {
                json rows = json::array();
                for (std::size_t r = 0; r < m.dim; ++r) {
                    json row = json::array();
                    for (std::size_t c = 0; c < m.dim; ++c) row.push_back(m.at(r, c));
                    rows.push_back(row);
                }
                json out{{"matrix", rows}};
                if (eigen) out["eigenvalue"] = leading_eigenvalue(m);
                std::cout << out.dump() << '\n';
            } else {
                std::cout << format_matrix(m);
                if (eigen) std::cout << leading_eigenvalue(m) << '\n';
            }
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
