#include "cheb/cli.hpp"

#include "cheb/analytic.hpp"
#include "cheb/cyclotomic.hpp"
#include "cheb/dihedral.hpp"
#include "cheb/error.hpp"
#include "cheb/sieve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace cheb::cli {

namespace {

constexpr int kMaxR = 62;

std::uint64_t pow2(int e) { return std::uint64_t{1} << e; }

// 2^e saturated at 2^63.
std::uint64_t pow2_saturated(int e) { return e >= 63 ? kSieveLimit : pow2(e); }

double effective_range_alpha(const RunConfig& cfg) {
    if (cfg.range_alpha) return *cfg.range_alpha;
    return cfg.command == Command::falsify && cfg.family == Family::cyclotomic ? cfg.alpha : 0.5;
}

bool uses_cyclotomic(const RunConfig& cfg) {
    return cfg.command == Command::cyclotomic ||
           (cfg.command == Command::falsify && cfg.family == Family::cyclotomic);
}

SieveOptions sieve_options(const RunConfig& cfg) {
    SieveOptions opts = SieveOptions::from_env();
    opts.workers = cfg.workers;
    return opts;
}

std::pair<int, int> validate(const RunConfig& cfg) {
    const auto [lo, hi] = default_r_range(cfg);
    const int r_min = cfg.r_min.value_or(lo);
    const int r_max = cfg.r_max.value_or(hi);
    if (r_min < 2) throw UsageError("--r-min must be >= 2");
    if (r_max > kMaxR) throw UsageError("--r-max must be <= 62");
    if (r_min > r_max) throw UsageError("--r-min must not exceed --r-max");
    if (cfg.workers == 0) throw UsageError("--workers must be >= 1");
    if (uses_cyclotomic(cfg) && !(cfg.alpha > 0 && cfg.alpha < 1)) {
        throw UsageError("--alpha must lie in (0, 1)");
    }
    if (cfg.command == Command::falsify) {
        if (!(cfg.bound.epsilon > 0)) throw UsageError("--epsilon must be positive");
        if (!(effective_range_alpha(cfg) >= 0)) throw UsageError("--range-alpha must be >= 0");
    }
    const std::uint64_t limit = sieve_limit(cfg, r_max);
    if (limit > kResourceLimit) {
        throw ResourceError("configuration needs a sieve up to " + std::to_string(limit) + ", above 2^40");
    }
    if (cfg.command == Command::sieve_check && limit > kReferenceSieveLimit) {
        throw ResourceError("sieve-check reference sieve is limited to 2^32");
    }
    return {r_min, r_max};
}

Table dihedral_table(const RunConfig& cfg, int r_min, int r_max) {
    const SieveOptions opts = sieve_options(cfg);
    Table t;
    t.command = "dihedral";
    t.columns = {"r", "n", "x", "pi_D", "li_x", "alpha_G", "p_min"};
    for (int r = r_min; r <= r_max; ++r) {
        const ChebotarevSample s = make_dihedral_sample(r, opts);
        const std::uint64_t p_min = min_split_prime(s.n, std::nullopt, opts);
        t.rows.push_back({std::int64_t{r}, s.n, s.x, s.pi_D, s.li_x, s.alpha_G, p_min});
    }
    return t;
}

Table cyclotomic_table(const RunConfig& cfg, int r_min, int r_max) {
    const SieveOptions opts = sieve_options(cfg);
    Table t;
    t.command = "cyclotomic";
    t.columns = {"r", "n", "T", "D_size", "density", "pi_D_at_T"};
    for (int r = r_min; r <= r_max; ++r) {
        const CyclotomicInstance inst = build_D(pow2(r), cfg.alpha, opts);
        const std::uint64_t pi_at_t = pi_D_cyclotomic(inst, inst.T, opts);
        t.rows.push_back({std::int64_t{r}, inst.n, inst.T, inst.D_size(), density_ratio(inst), pi_at_t});
    }
    t.summary = {{"alpha", cfg.alpha}};
    return t;
}

Table falsify_table(const RunConfig& cfg, int r_min, int r_max) {
    const SieveOptions opts = sieve_options(cfg);
    std::vector<ChebotarevSample> samples;
    for (int r = r_min; r <= r_max; ++r) {
        if (cfg.family == Family::dihedral) {
            samples.push_back(make_dihedral_sample(r, opts));
        } else {
            samples.push_back(make_cyclotomic_sample(build_D(pow2(r), cfg.alpha, opts), opts));
        }
    }
    ScanPolicy policy;
    policy.range_alpha = effective_range_alpha(cfg);
    const ScanReport report = falsification_scan(cfg.bound, samples, policy);

    Table t;
    t.command = "falsify";
    t.columns = {"r", "n", "x", "error", "denominator", "implied_constant"};
    for (const ScanRow& row : report.rows) {
        t.rows.push_back({std::int64_t{row.r}, row.n, row.x, row.error, row.denominator, row.implied_constant});
    }
    t.summary = {
        {"family", std::string(to_string(cfg.family))},
        {"variant", std::string(to_string(cfg.bound.variant))},
        {"a", cfg.bound.a},
        {"b", cfg.bound.b},
        {"epsilon", cfg.bound.epsilon},
        {"range_alpha", policy.range_alpha},
        {"slope", report.slope},
        {"ratio", report.ratio},
        {"verdict", std::string(to_string(report.verdict))},
        {"boundary_waived", report.any_boundary_waived},
        {"slope_threshold", policy.slope_threshold},
        {"ratio_threshold", policy.ratio_threshold},
        {"note", std::string("verdict thresholds are tool policy")},
    };
    if (cfg.family == Family::cyclotomic) t.summary.emplace_back("alpha", cfg.alpha);
    return t;
}

Table serre_table(const RunConfig& cfg, int r_min, int r_max) {
    const SieveOptions opts = sieve_options(cfg);
    Table t;
    t.command = "serre";
    t.columns = {"r", "n", "p_min", "log_dK_lo", "log_dK_hi"};
    std::vector<SplitPoint> points;
    for (int r = r_min; r <= r_max; ++r) {
        const std::uint64_t n = pow2(r);
        const std::uint64_t p_min = min_split_prime(n, std::nullopt, opts);
        const auto [lo, hi] = discriminant_bracket(n, 2);
        t.rows.push_back({std::int64_t{r}, n, p_min, lo, hi});
        points.push_back({n, p_min});
    }
    double e = std::nan(""), c = std::nan("");
    bool low_confidence = true;
    if (points.size() >= 2) {
        const SerreFit fit = serre_fit(points, 2);
        e = fit.exponent_e;
        c = fit.constant_c;
        low_confidence = fit.low_confidence;
    }
    t.summary = {{"exponent_e", e},
                 {"constant_c", c},
                 {"points", static_cast<std::uint64_t>(points.size())},
                 {"low_confidence", low_confidence}};
    return t;
}

// Plain sieve of Eratosthenes over every integer below x.
std::uint64_t reference_prime_count(std::uint64_t x) {
    if (x < 3) return 0;
    std::vector<bool> composite(static_cast<std::size_t>(x), false);
    std::uint64_t count = 0;
    for (std::uint64_t m = 2; m < x; ++m) {
        if (composite[m]) continue;
        ++count;
        for (std::uint64_t k = m * m; k < x; k += m) composite[k] = true;
    }
    return count;
}

Table sieve_check_table(const RunConfig& cfg, int r_min, int r_max) {
    const SieveOptions opts = sieve_options(cfg);
    Table t;
    t.command = "sieve-check";
    t.columns = {"r", "x", "prime_count", "reference", "match"};
    bool all_match = true;
    for (int r = r_min; r <= r_max; ++r) {
        const std::uint64_t x = pow2(r);
        const std::uint64_t fast = prime_count(static_cast<double>(x), opts);
        const std::uint64_t slow = reference_prime_count(x);
        all_match = all_match && fast == slow;
        t.rows.push_back({std::int64_t{r}, x, fast, slow, fast == slow});
    }
    t.summary = {{"all_match", all_match}};
    return t;
}

std::string cell_text(const Cell& c) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_double(v);
            } else if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return std::to_string(v);
            }
        },
        c);
}

nlohmann::json cell_json(const Cell& c) {
    return std::visit([](const auto& v) { return nlohmann::json(v); }, c);
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case Errc::invalid_range:
    case Errc::invalid_residue:
    case Errc::invalid_parameter:
    case Errc::domain_error:
    case Errc::incompatible_variant:
    case Errc::too_few_samples:
    case Errc::out_of_range_sample:
    case Errc::degenerate_fit:
        return kExitUsage;
    case Errc::range_overflow:
    case Errc::size_limit:
    case Errc::search_limit:
        return kExitResource;
    case Errc::division_by_zero:
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace

std::pair<int, int> default_r_range(const RunConfig& cfg) {
    switch (cfg.command) {
    case Command::dihedral: return {2, 12};
    case Command::cyclotomic: return {2, 20};
    case Command::falsify: return cfg.family == Family::dihedral ? std::pair{4, 12} : std::pair{8, 20};
    case Command::serre: return {2, 8};
    case Command::sieve_check: return {10, 24};
    }
    return {2, 2};
}

std::uint64_t sieve_limit(const RunConfig& cfg, int r_max) {
    switch (cfg.command) {
    case Command::dihedral:
    case Command::serre:
        // The least split prime is searched below 64 n^2.
        return pow2_saturated(2 * r_max + 6);
    case Command::cyclotomic:
        return static_cast<std::uint64_t>(std::ceil(cyclotomic_threshold(pow2(r_max), cfg.alpha)));
    case Command::falsify:
        if (cfg.family == Family::dihedral) return pow2_saturated(2 * r_max);
        return static_cast<std::uint64_t>(std::ceil(cyclotomic_threshold(pow2(r_max), cfg.alpha)));
    case Command::sieve_check:
        return pow2_saturated(r_max);
    }
    return 0;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Table& t) {
    std::ostringstream os;
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << '\n';
    }
    for (const auto& [key, value] : t.summary) os << "# " << key << '=' << cell_text(value) << '\n';
    return os.str();
}

std::string to_json(const Table& t) {
    nlohmann::ordered_json doc;
    doc["command"] = t.command;
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
        doc["rows"].push_back(std::move(obj));
    }
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [key, value] : t.summary) summary[key] = cell_json(value);
    doc["summary"] = std::move(summary);
    return doc.dump(2) + "\n";
}

Table build_table(const RunConfig& cfg) {
    const auto [r_min, r_max] = validate(cfg);
    switch (cfg.command) {
    case Command::dihedral: return dihedral_table(cfg, r_min, r_max);
    case Command::cyclotomic: return cyclotomic_table(cfg, r_min, r_max);
    case Command::falsify: return falsify_table(cfg, r_min, r_max);
    case Command::serre: return serre_table(cfg, r_min, r_max);
    case Command::sieve_check: return sieve_check_table(cfg, r_min, r_max);
    }
    throw UsageError("unknown command");
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        const Table table = build_table(cfg);
        text = cfg.format == Format::csv ? to_csv(table) : to_json(table);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ResourceError& e) {
        err << "resource guard: " << e.what() << '\n';
        return kExitResource;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }

    if (cfg.output_path.empty() || cfg.output_path == "-") {
        out << text;
        out.flush();
        return out ? kExitOk : kExitIo;
    }
    std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "i/o error: cannot open " << cfg.output_path << '\n';
        return kExitIo;
    }
    file << text;
    file.close();
    if (!file) {
        err << "i/o error: failed writing " << cfg.output_path << '\n';
        return kExitIo;
    }
    return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Chebotarev error-term laboratory"};
    app.require_subcommand(1);

    RunConfig cfg;
    int r_min = 0, r_max = 0;
    double range_alpha = 0;
    std::string variant_name = "C", format_name = "csv", family_name = "dihedral";

    const std::map<std::string, Variant> variants{
        {"C", Variant::C}, {"Cprime", Variant::Cprime}, {"FG", Variant::FG}};
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};
    const std::map<std::string, Family> families{{"dihedral", Family::dihedral},
                                                 {"cyclotomic", Family::cyclotomic}};

    struct Sub {
        CLI::App* app;
        Command command;
        CLI::Option* r_min;
        CLI::Option* r_max;
        CLI::Option* range_alpha;
    };
    std::vector<Sub> subs;
    const auto add = [&](const char* name, const char* help, Command command) {
        CLI::App* sub = app.add_subcommand(name, help);
        Sub s{sub, command, nullptr, nullptr, nullptr};
        s.r_min = sub->add_option("--r-min", r_min, "smallest exponent r (n = 2^r)");
        s.r_max = sub->add_option("--r-max", r_max, "largest exponent r");
        sub->add_option("--alpha", cfg.alpha, "cyclotomic range exponent, in (0, 1)")->capture_default_str();
        s.range_alpha = sub->add_option("--range-alpha", range_alpha, "range x > n (log n)^range_alpha");
        sub->add_option("--variant", variant_name, "bound template")->check(CLI::IsMember(variants));
        sub->add_option("--a", cfg.bound.a, "exponent of |D|")->capture_default_str();
        sub->add_option("--b", cfg.bound.b, "exponent of |G| or alpha(G)")->capture_default_str();
        sub->add_option("--epsilon", cfg.bound.epsilon, "slack exponent, > 0")->capture_default_str();
        sub->add_option("--output", cfg.output_path, "output file (default stdout)");
        sub->add_option("--format", format_name, "csv or json")->check(CLI::IsMember(formats));
        sub->add_option("--workers", cfg.workers, "sieve worker threads")->capture_default_str();
        if (command == Command::falsify) {
            sub->add_option("--family", family_name, "dihedral or cyclotomic")->check(CLI::IsMember(families));
        }
        subs.push_back(s);
    };
    add("dihedral", "dihedral family: pi_D(n^2), alpha(G), least split prime", Command::dihedral);
    add("cyclotomic", "cyclotomic family: residue set D and pi_D(T)", Command::cyclotomic);
    add("falsify", "implied constants of a bound template along a family", Command::falsify);
    add("serre", "least split primes and the fitted exponent", Command::serre);
    add("sieve-check", "segmented sieve against a plain reference sieve", Command::sieve_check);

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(args);
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

    for (const Sub& s : subs) {
        if (!s.app->parsed()) continue;
        cfg.command = s.command;
        if (s.r_min->count() > 0) cfg.r_min = r_min;
        if (s.r_max->count() > 0) cfg.r_max = r_max;
        if (s.range_alpha->count() > 0) cfg.range_alpha = range_alpha;
    }
    cfg.bound.variant = variants.at(variant_name);
    cfg.format = formats.at(format_name);
    cfg.family = families.at(family_name);
    return run(cfg, out, err);
}

}  // namespace cheb::cli
