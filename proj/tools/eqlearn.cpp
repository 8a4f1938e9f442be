// eqlearn command-line driver.
//
// Exit codes: 0 success, 1 property violation, 2 usage error, 3 I/O or parse
// error. Reports go to stdout (or are appended to --output); wall-clock
// timing goes to stderr so that reports stay byte-identical across runs.

#include "eqlearn/class_io.hpp"
#include "eqlearn/compression.hpp"
#include "eqlearn/staged.hpp"
#include "eqlearn/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace eqlearn;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int exit_violation = 1;
constexpr int exit_usage = 2;
constexpr int exit_io = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutputOptions {
    std::string format = "text";
    std::string path;
};

struct Report {
    std::string command;
    ordered_json config = ordered_json::object();
    ordered_json results = ordered_json::object();
};

std::string scalar_text(const ordered_json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    return v.dump();
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render_text(const Report& r)
{
    std::ostringstream os;
    for (const auto& [k, v] : r.results.items())
        os << k << ": " << scalar_text(v) << "\n";
    os << "command: " << r.command << "\n";
    os << "version: " << EQLEARN_VERSION << "\n";
    for (const auto& [k, v] : r.config.items())
        os << "config." << k << ": " << scalar_text(v) << "\n";
    return os.str();
}

ordered_json as_json(const Report& r)
{
    ordered_json doc;
    doc["command"] = r.command;
    doc["version"] = EQLEARN_VERSION;
    doc["config"] = r.config;
    doc["results"] = r.results;
    return doc;
}

// Columns: command, version, every scalar config field, every scalar result
// field, in report order. Nested values (histograms, witness lists) are JSON
// only.
std::pair<std::string, std::string> render_csv(const Report& r)
{
    std::vector<std::string> head{"command", "version"};
    std::vector<std::string> row{r.command, EQLEARN_VERSION};
    for (const auto* part : {&r.config, &r.results})
        for (const auto& [k, v] : part->items())
            if (v.is_primitive()) {
                head.push_back(k);
                row.push_back(scalar_text(v));
            }
    auto join = [](const std::vector<std::string>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i)
            s += (i ? "," : "") + csv_field(xs[i]);
        return s + "\n";
    };
    return {join(head), join(row)};
}

void emit(const Report& r, const OutputOptions& out)
{
    std::string text;
    std::string header;
    if (out.format == "json") {
        // appended records are one compact object per line
        text = out.path.empty() ? as_json(r).dump(2) + "\n" : as_json(r).dump() + "\n";
    } else if (out.format == "csv") {
        std::tie(header, text) = render_csv(r);
    } else {
        text = render_text(r);
    }

    if (out.path.empty()) {
        std::cout << header << text;
        std::cout.flush();
        return;
    }
    std::error_code ec;
    const bool fresh = !std::filesystem::exists(out.path, ec) || std::filesystem::file_size(out.path, ec) == 0;
    std::ofstream f(out.path, std::ios::binary | std::ios::app);
    if (!f)
        throw std::runtime_error("cannot open output file '" + out.path + "'");
    if (fresh)
        f << header;
    f << text;
    if (!f)
        throw std::runtime_error("failed writing output file '" + out.path + "'");
}

std::size_t target_index(const ConceptClass& cls, const std::string& label)
{
    if (auto i = cls.find_label(label))
        return *i;
    throw UsageError("no concept labeled '" + label + "' in the class");
}

ordered_json histogram_json(const std::map<std::size_t, std::size_t>& h)
{
    ordered_json out = ordered_json::object();
    for (auto [k, n] : h)
        out[std::to_string(k)] = n;
    return out;
}

ordered_json point_names(const Domain& d, const std::vector<PointId>& pts)
{
    ordered_json out = ordered_json::array();
    for (auto x : pts)
        out.push_back(d.point(x));
    return out;
}

// "x1=1,x2=0"
PartialAssignment parse_sample(const Domain& d, const std::string& text)
{
    PartialAssignment f;
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw UsageError("sample entries must look like point=0 or point=1, got '" + item + "'");
        auto name = item.substr(0, eq);
        auto value = item.substr(eq + 1);
        auto x = d.find(name);
        if (!x)
            throw UsageError("sample names unknown point '" + name + "'");
        if (value != "0" && value != "1")
            throw UsageError("sample label for '" + name + "' must be 0 or 1");
        if (f.contains(*x))
            throw UsageError("sample assigns '" + name + "' twice");
        f.set(*x, value == "1");
    }
    if (f.empty())
        throw UsageError("sample is empty");
    return f;
}

// ------------------------------------------------------------------ commands

struct LdimArgs {
    std::string cls;
};

int cmd_ldim(const LdimArgs& a, const OutputOptions& out)
{
    auto file = read_class_file(a.cls);
    Report r{"ldim"};
    r.config["class"] = a.cls;
    r.results["ldim"] = ldim(file.cls);
    r.results["concepts"] = file.cls.size();
    r.results["points"] = file.cls.domain().size();
    emit(r, out);
    return 0;
}

struct LearnArgs {
    std::string cls;
    std::string target;
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
};

int cmd_learn(const LearnArgs& a, const OutputOptions& out)
{
    auto file = read_class_file(a.cls);
    const auto t = target_index(file.cls, a.target);
    auto s = monte_carlo_trials(file.cls, file.cls.concept_at(t), a.trials, a.seed);
    const int d = ldim(file.cls);

    Report r{"learn"};
    r.config["class"] = a.cls;
    r.config["target"] = a.target;
    r.config["trials"] = a.trials;
    r.config["seed"] = a.seed;
    r.results["ldim"] = d;
    r.results["bound"] = 2 * d;
    r.results["mean"] = s.mean();
    r.results["variance"] = s.variance();
    r.results["standard_error"] = s.standard_error();
    r.results["max"] = s.max_queries;
    r.results["mean_counterexamples"] = s.mean() - 1.0;
    r.results["positive_drop_fraction"] =
        s.counterexamples == 0 ? 0.0 : static_cast<double>(s.positive_drops) / static_cast<double>(s.counterexamples);
    r.results["mean_drop"] = s.mean_drop();
    r.results["histogram"] = histogram_json(s.histogram);
    emit(r, out);
    return 0;
}

struct LearnExactArgs {
    std::string cls;
    std::string target;
};

int cmd_learn_exact(const LearnExactArgs& a, const OutputOptions& out)
{
    auto file = read_class_file(a.cls);
    const auto t = target_index(file.cls, a.target);
    const Rational e = exact_expected_queries(file.cls, file.cls.concept_at(t));
    const int d = ldim(file.cls);

    Report r{"learn-exact"};
    r.config["class"] = a.cls;
    r.config["target"] = a.target;
    r.results["expected_queries"] = to_string(e);
    r.results["expected_queries_approx"] = to_double(e);
    r.results["expected_counterexamples"] = to_string(e - 1);
    r.results["ldim"] = d;
    r.results["bound"] = 2 * d;
    r.results["counterexamples_within_bound"] = e - 1 <= 2 * d;
    r.results["queries_within_bound"] = e <= 2 * d;
    emit(r, out);
    return 0;
}

struct StagedArgs {
    std::string family = "intervals";
    std::string prior = "1/2";
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    int stage_cap = default_stage_cap;
};

int cmd_staged(const StagedArgs& a, const OutputOptions& out)
{
    std::unique_ptr<CountableFamily> family;
    Report r{"staged"};
    r.config["family"] = a.family;
    if (a.family == "intervals") {
        Rational p;
        try {
            p = parse_decimal(a.prior);
        } catch (const std::invalid_argument&) {
            throw UsageError("--prior-geometric must be a decimal or p/q, got '" + a.prior + "'");
        }
        if (p <= 0 || p >= 1)
            throw UsageError("--prior-geometric must lie strictly between 0 and 1");
        family = std::make_unique<IntervalFamily>(p);
        r.config["prior_geometric"] = to_string(p);
    } else if (a.family.starts_with("file:")) {
        auto path = a.family.substr(5);
        family = std::make_unique<FiniteFamily>(read_class_file(path), path);
    } else {
        throw UsageError("--family must be 'intervals' or 'file:<path>'");
    }
    if (a.stage_cap < 1)
        throw UsageError("--stage-cap must be positive");
    r.config["trials"] = a.trials;
    r.config["seed"] = a.seed;
    r.config["stage_cap"] = a.stage_cap;

    auto s = staged_trials(*family, a.trials, a.seed, a.stage_cap);
    const std::size_t half = a.trials / 2;
    r.results["ldim_bound"] = family->ldim_bound();
    r.results["identified"] = s.identified_count();
    r.results["stage_cap_reached"] = a.trials - s.identified_count();
    r.results["mean"] = s.mean();
    r.results["variance"] = s.variance();
    r.results["max"] = s.max_queries();
    r.results["mean_stages"] = s.mean_stages();
    r.results["first_half_mean"] = s.mean(0, half);
    r.results["second_half_mean"] = s.mean(half, a.trials);
    r.results["histogram"] = histogram_json(s.histogram());
    emit(r, out);
    return 0;
}

struct CompressArgs {
    std::string cls;
    bool verify = false;
    std::optional<std::size_t> max_sample_size;
    std::string sample;
};

int cmd_compress(const CompressArgs& a, const OutputOptions& out)
{
    if (!a.verify && a.sample.empty())
        throw UsageError("compress needs --verify or --sample");
    auto file = read_class_file(a.cls);
    const auto& cls = file.cls;
    const Domain& dom = cls.domain();

    Report r{"compress"};
    r.config["class"] = a.cls;
    r.config["verify"] = a.verify;
    if (a.max_sample_size)
        r.config["max_sample_size"] = *a.max_sample_size;
    if (!a.sample.empty())
        r.config["sample"] = a.sample;

    CompressionScheme scheme(cls);
    r.results["d"] = scheme.dimension();
    r.results["rho_count"] = scheme.reconstructor_count();

    int code = 0;
    if (!a.sample.empty()) {
        auto f = parse_sample(dom, a.sample);
        auto tr = scheme.compress_traced(f);
        r.results["tuple"] = point_names(dom, tr.tuple.points);
        r.results["halted_early"] = tr.halted_early;
        ordered_json recon = ordered_json::array();
        for (std::size_t i = 0; i < scheme.reconstructor_count(); ++i) {
            Concept c = scheme.reconstruct(i, tr.tuple);
            recon.push_back({{"rho", i}, {"concept", c.to_bitstring()}, {"recovers_sample", f.agrees_with(c)}});
        }
        r.results["reconstructions"] = std::move(recon);
    }
    if (a.verify) {
        auto rep = certify_scheme(cls, a.max_sample_size);
        r.results["samples_tested"] = rep.samples_tested;
        r.results["successes"] = rep.successes;
        r.results["tuple_length_ok"] = rep.tuple_length_ok;
        r.results["subset_ok"] = rep.subset_ok;
        r.results["passed"] = rep.passed();
        ordered_json failures = ordered_json::array();
        for (const auto& fail : rep.failures)
            failures.push_back({{"sample", fail.sample.describe(dom)},
                {"tuple", point_names(dom, fail.tuple.points)},
                {"reason", fail.reason}});
        r.results["failures"] = std::move(failures);
        if (!rep.passed())
            code = exit_violation;
    }
    emit(r, out);
    return code;
}

struct VerifyArgs {
    std::string cls;
    std::size_t random_classes = 0;
    std::size_t max_domain = 5;
    std::size_t max_concepts = 8;
    std::uint64_t seed = 7;
    std::size_t max_cycle_length = 5;
    std::optional<std::size_t> max_sample_size;
    std::size_t max_witnesses = 3;
    bool total_query_bound = false;
};

int cmd_verify(const VerifyArgs& a, const OutputOptions& out)
{
    Report r{"verify"};
    std::vector<ConceptClass> corpus;
    if (!a.cls.empty()) {
        if (a.random_classes > 0)
            throw UsageError("give either --class or --random-classes, not both");
        corpus.push_back(read_class_file(a.cls).cls);
        r.config["class"] = a.cls;
    } else if (a.random_classes > 0) {
        if (a.max_domain < 1 || a.max_domain > 20 || a.max_concepts < 1)
            throw UsageError("--max-domain must be in [1, 20] and --max-concepts positive");
        corpus = random_corpus(a.seed, a.random_classes, a.max_domain, a.max_concepts);
        r.config["random_classes"] = a.random_classes;
        r.config["max_domain"] = a.max_domain;
        r.config["max_concepts"] = a.max_concepts;
        r.config["seed"] = a.seed;
    } else {
        throw UsageError("verify needs --class or --random-classes");
    }
    if (a.max_cycle_length < 2)
        throw UsageError("--max-cycle-length must be at least 2");
    r.config["max_cycle_length"] = a.max_cycle_length;
    if (a.max_sample_size)
        r.config["max_sample_size"] = *a.max_sample_size;
    r.config["total_query_bound"] = a.total_query_bound;

    VerifyOptions opts;
    opts.max_cycle_length = a.max_cycle_length;
    opts.max_sample_size = a.max_sample_size;
    auto results = verify_all(corpus, opts);
    if (a.total_query_bound)
        results.push_back(check_total_query_bound(corpus));

    bool all_passed = true;
    ordered_json witnesses = ordered_json::array();
    for (const auto& p : results) {
        all_passed = all_passed && p.passed();
        r.results[p.name] = {{"passed", p.passed()}, {"classes", p.classes}, {"checks", p.checks},
            {"violations", p.violations.size()}};
        for (std::size_t i = 0; i < p.violations.size() && i < a.max_witnesses; ++i) {
            const auto& w = p.violations[i];
            witnesses.push_back({{"property", p.name}, {"class_index", w.class_index}, {"detail", w.detail},
                {"class", ordered_json::parse(save_class(corpus[w.class_index]))}});
        }
    }
    r.results["passed"] = all_passed;
    r.results["witnesses"] = std::move(witnesses);
    emit(r, out);
    return all_passed ? 0 : exit_violation;
}

struct GenArgs {
    std::uint64_t seed = 1;
    std::size_t points = 4;
    std::size_t concepts = 6;
};

int cmd_gen(const GenArgs& a, const OutputOptions& out)
{
    if (a.points < 1 || a.points > 20)
        throw UsageError("--points must be in [1, 20]");
    if (a.concepts < 1 || (a.points < 64 && a.concepts > (std::size_t{1} << a.points)))
        throw UsageError("--concepts must be in [1, 2^points]");
    Rng rng(a.seed);
    auto cls = random_class(rng, a.points, a.concepts);
    auto doc = ordered_json::parse(save_class(cls));
    doc["generator"] = {{"command", "gen"}, {"version", EQLEARN_VERSION}, {"seed", a.seed}, {"points", a.points},
        {"concepts", a.concepts}};
    std::string text = doc.dump(2) + "\n";
    if (out.path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(out.path, std::ios::binary);
    if (!f || !(f << text))
        throw std::runtime_error("cannot write '" + out.path + "'");
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Equivalence-query learning with random counterexamples: experiments and exact checks", "eqlearn"};
    app.set_version_flag("--version", EQLEARN_VERSION);
    app.require_subcommand(1);

    OutputOptions out;
    bool quiet = false;
    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", out.format, "Report format")->check(CLI::IsMember({"text", "csv", "json"}));
        sub->add_option("--output", out.path, "Append the report to this file instead of stdout");
        sub->add_flag("-q,--quiet", quiet, "Do not print timing to stderr");
    };

    int code = 0;
    LdimArgs ldim_args;
    auto* ldim_cmd = app.add_subcommand("ldim", "Littlestone dimension of a class file");
    ldim_cmd->add_option("--class", ldim_args.cls, "Class file")->required();
    add_output(ldim_cmd);
    ldim_cmd->callback([&] { code = cmd_ldim(ldim_args, out); });

    LearnArgs learn_args;
    auto* learn_cmd = app.add_subcommand("learn", "Monte Carlo runs of the max-min learner");
    learn_cmd->add_option("--class", learn_args.cls, "Class file")->required();
    learn_cmd->add_option("--target", learn_args.target, "Target concept label")->required();
    learn_cmd->add_option("--trials", learn_args.trials, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
    learn_cmd->add_option("--seed", learn_args.seed, "Master seed")->capture_default_str();
    add_output(learn_cmd);
    learn_cmd->callback([&] { code = cmd_learn(learn_args, out); });

    LearnExactArgs exact_args;
    auto* exact_cmd = app.add_subcommand("learn-exact", "Exact expected query count of the max-min learner");
    exact_cmd->add_option("--class", exact_args.cls, "Class file")->required();
    exact_cmd->add_option("--target", exact_args.target, "Target concept label")->required();
    add_output(exact_cmd);
    exact_cmd->callback([&] { code = cmd_learn_exact(exact_args, out); });

    StagedArgs staged_args;
    auto* staged_cmd = app.add_subcommand("staged", "Staged learner on a countable family with a prior");
    staged_cmd->add_option("--family", staged_args.family, "'intervals' or 'file:<class file with tau>'")->capture_default_str();
    staged_cmd->add_option("--prior-geometric", staged_args.prior, "Geometric prior ratio for intervals")->capture_default_str();
    staged_cmd->add_option("--trials", staged_args.trials, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
    staged_cmd->add_option("--seed", staged_args.seed, "Master seed")->capture_default_str();
    staged_cmd->add_option("--stage-cap", staged_args.stage_cap, "Give up after this many stages")->capture_default_str();
    add_output(staged_cmd);
    staged_cmd->callback([&] { code = cmd_staged(staged_args, out); });

    CompressArgs compress_args;
    auto* compress_cmd = app.add_subcommand("compress", "Compression scheme: compress one sample or certify all");
    compress_cmd->add_option("--class", compress_args.cls, "Class file")->required();
    compress_cmd->add_flag("--verify", compress_args.verify, "Round-trip every realizable sample");
    compress_cmd->add_option("--max-sample-size", compress_args.max_sample_size, "Largest sample domain to enumerate");
    compress_cmd->add_option("--sample", compress_args.sample, "Sample to compress, e.g. x1=1,x2=0");
    add_output(compress_cmd);
    compress_cmd->callback([&] { code = cmd_compress(compress_args, out); });

    VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Exact property checks over a class or a random corpus");
    verify_cmd->add_option("--class", verify_args.cls, "Class file");
    verify_cmd->add_option("--random-classes", verify_args.random_classes, "Size of the random corpus");
    verify_cmd->add_option("--max-domain", verify_args.max_domain, "Largest domain in the corpus")->capture_default_str();
    verify_cmd->add_option("--max-concepts", verify_args.max_concepts, "Largest class in the corpus")->capture_default_str();
    verify_cmd->add_option("--seed", verify_args.seed, "Corpus seed")->capture_default_str();
    verify_cmd->add_option("--max-cycle-length", verify_args.max_cycle_length, "Longest cycle searched")->capture_default_str();
    verify_cmd->add_option("--max-sample-size", verify_args.max_sample_size, "Largest sample certified for compression");
    verify_cmd->add_option("--max-witnesses", verify_args.max_witnesses, "Witness classes kept per property")->capture_default_str();
    verify_cmd->add_flag("--total-query-bound", verify_args.total_query_bound,
        "Also check that expected total queries, final one included, stay within 2 ldim");
    add_output(verify_cmd);
    verify_cmd->callback([&] { code = cmd_verify(verify_args, out); });

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Random class file");
    gen_cmd->add_option("--seed", gen_args.seed, "Seed")->capture_default_str();
    gen_cmd->add_option("--points", gen_args.points, "Domain size")->capture_default_str();
    gen_cmd->add_option("--concepts", gen_args.concepts, "Number of concepts")->capture_default_str();
    gen_cmd->add_option("--output", out.path, "Write the class file here instead of stdout");
    gen_cmd->add_flag("-q,--quiet", quiet, "Do not print timing to stderr");
    gen_cmd->callback([&] { code = cmd_gen(gen_args, out); });

    const auto start = std::chrono::steady_clock::now();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const DomainMismatchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what();
        if (e.position())
            std::cerr << " (byte " << *e.position() << ")";
        std::cerr << "\n";
        return exit_io;
    } catch (const NotRealizableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io;
    }
    if (!quiet) {
        std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        std::cerr << "elapsed_seconds: " << elapsed.count() << "\n";
    }
    return code;
}
