#include "sybilsim/cli/cli.hpp"

#include "sybilsim/cli/backend.hpp"
#include "sybilsim/errors.hpp"
#include "sybilsim/graph.hpp"
#include "sybilsim/graph_gen.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace sybilsim::cli
{

std::filesystem::path
outputRoot()
{
    if (char const* env = std::getenv(kOutputRootEnv); env && *env)
        return env;
    return "runs";
}

namespace
{

std::string
shortest(double x)
{
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(x);
}

// Flags mirroring every config field. Unset flags leave the file/preset
// value alone.
struct Overrides
{
    std::optional<std::string> name;
    std::optional<std::uint32_t> honest, corrupt, sybil, degree, rounds;
    std::optional<std::string> variant, exposure, alpha, gamma, phi, arithmetic;
    std::optional<double> p, q;
    std::optional<std::uint64_t> seed;
    std::optional<bool> ratioCheck;

    void
    apply(RunConfig& c) const
    {
        if (name)
            c.name = *name;
        if (honest)
            c.honest = *honest;
        if (corrupt)
            c.corrupt = *corrupt;
        if (sybil)
            c.sybil = *sybil;
        if (degree)
            c.degree = *degree;
        if (rounds)
            c.rounds = *rounds;
        if (variant)
            c.variant = *variant;
        if (exposure)
            c.exposure = *exposure;
        if (alpha)
            c.alpha = *alpha;
        if (gamma)
            c.gamma = *gamma;
        if (phi)
            c.phi = *phi;
        if (arithmetic)
            c.arithmetic = parseArithmetic(*arithmetic);
        if (p)
            c.p = *p;
        if (q)
            c.q = *q;
        if (seed)
            c.seed = *seed;
        if (ratioCheck)
            c.ratioCheck = *ratioCheck;
    }
};

struct Source
{
    std::optional<std::string> preset;
    std::optional<std::string> configFile;
};

void
addSource(CLI::App& app, Source& s)
{
    app.add_option("--preset", s.preset, "start from a named preset");
    app.add_option("--config", s.configFile, "JSON config file")
        ->check(CLI::ExistingFile);
}

void
addOverrides(CLI::App& app, Overrides& o, bool qIsList)
{
    app.add_option("--name", o.name, "run name");
    app.add_option("--honest", o.honest, "honest identities");
    app.add_option("--corrupt", o.corrupt, "corrupt identities");
    app.add_option("--sybil", o.sybil, "sybil identities");
    app.add_option("--degree", o.degree, "target degree d");
    app.add_option("--rounds", o.rounds, "number of rounds T");
    app.add_option("--variant", o.variant,
                   "static | regenerating | regenerating-modified | probabilistic");
    app.add_option("--exposure", o.exposure,
                   "round-robin | bernoulli | uniform-pick");
    app.add_option("--alpha", o.alpha, "fine multiplier, e.g. 2 or 5/2");
    app.add_option("--p", o.p, "per-round sybil exposure probability");
    if (!qIsList)
        app.add_option("--q", o.q, "per-round genuine departure probability");
    app.add_option("--seed", o.seed, "RNG seed");
    app.add_option("--ratio-check", o.ratioCheck,
                   "enforce community ratio bounds (true/false)");
    app.add_option("--gamma", o.gamma, "corrupt share bound");
    app.add_option("--phi", o.phi, "vertex expansion used by the ratio bound");
    app.add_option("--arithmetic", o.arithmetic, "exact | float");
}

RunConfig
resolve(Source const& s, Overrides const& o)
{
    RunConfig c;
    if (s.preset)
        c = findPreset(*s.preset).config;
    if (s.configFile)
    {
        std::ifstream in(*s.configFile);
        if (!in)
            throw IoError("cannot open " + *s.configFile);
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(in);
        }
        catch (nlohmann::json::parse_error const& e)
        {
            throw ConfigError(*s.configFile + ": " + e.what());
        }
        c = fromJson(j, c);
    }
    o.apply(c);
    return c;
}

std::filesystem::path
outDir(std::optional<std::string> const& out, RunConfig const& c)
{
    if (out)
        return *out;
    return outputRoot() / (c.name + "-seed" + std::to_string(c.seed));
}

// ---------------------------------------------------------------------------
// simulate

int
cmdSimulate(RunConfig const& c, std::filesystem::path const& dir, bool decimal,
            std::ostream& out)
{
    validate(c);
    auto const summary = runToDirectory(c, dir, RunOptions{decimal});
    auto const& f = summary["final"];
    out << "wrote " << dir.string() << " (" << summary["rounds_completed"]
        << " rounds, " << arithmeticName(c.arithmetic) << ")\n";
    out << "C+X = " << f["circulation_plus_tax"].get<std::string>()
        << ", excess = " << f["excess"].get<std::string>()
        << ", tax = " << f["tax_collected"].get<std::string>() << '\n';
    if (c.rounds == 0)
        out << "no rounds run\n";
    else if (summary["excess_zero_from"].is_null())
        out << "excess nonzero at the last round\n";
    else
        out << "excess zero from round " << summary["excess_zero_from"] << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check-graph

struct CheckGraphArgs
{
    std::optional<std::string> file;
    bool gen = false;
    std::uint32_t honest = 60, corrupt = 40, sybil = 20;
    std::optional<std::uint32_t> degree;
    std::uint64_t seed = 1;
    bool approx = false;
    std::uint64_t samples = 20000;
    bool ratio = false;
    std::optional<std::string> write;
};

int
cmdCheckGraph(CheckGraphArgs const& a, std::ostream& out, std::ostream& err)
{
    CommunityGraph g;
    GraphCheckOptions opts;
    opts.degree = a.degree;
    Rng rng(a.seed);
    if (a.gen)
    {
        GenParams p;
        p.counts = {a.honest, a.corrupt, a.sybil};
        p.degree = a.degree.value_or(6);
        opts.degree = p.degree;
        g = randomGraphGen(CommunityGraph{}, p, rng, SequentialIds{});
    }
    else if (a.file)
    {
        g = readGraphDump(std::filesystem::path(*a.file)).graph;
    }
    else
    {
        err << "check-graph: give a graph file or --gen\n";
        return kExitConfig;
    }
    if (a.ratio)
        opts.ratio = TypeCounts{a.honest, a.corrupt, a.sybil};
    if (a.write)
        writeGraphDump(std::filesystem::path(*a.write), g);

    auto const report = checkGraphInvariants(g, opts);
    out << report;

    int status = report.ok() ? kExitOk : kExitFailure;
    if (g.nodeCount() < 2)
    {
        out << "phi: undefined for fewer than 2 nodes\n";
        return status;
    }
    if (g.nodeCount() > kExactExpansionCap && !a.approx)
    {
        err << "check-graph: " << g.nodeCount() << " nodes exceed the exact cap of "
            << kExactExpansionCap << "; rerun with --approx for a sampled estimate\n";
        return kExitConfig;
    }
    if (g.nodeCount() <= kExactExpansionCap)
    {
        auto r = vertexExpansion(g);
        out << "phi = " << formatAmount(r.phi) << " (exact, " << r.subsets
            << " subsets)\n";
    }
    else
    {
        auto r = sampledVertexExpansion(g, a.samples, rng);
        out << "phi <= " << formatAmount(r.phi) << " ~ "
            << formatAmountDecimal(r.phi) << " (sampled estimate, " << r.subsets
            << " samples)\n";
    }
    return status;
}

// ---------------------------------------------------------------------------
// presets

int
cmdPresets(std::optional<std::string> const& name, std::ostream& out)
{
    if (!name)
    {
        for (auto const& p : presets())
            out << p.name << "  " << p.description << '\n';
        return kExitOk;
    }
    auto const& p = findPreset(*name);
    nlohmann::json j = toJson(p.config);
    if (p.sweep)
    {
        j["sweep"] = {{"q", p.sweep->qs}, {"replicates", p.sweep->replicates}};
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

} // namespace

// ---------------------------------------------------------------------------
// sweep

std::size_t
runSweep(RunConfig const& base, SweepOptions const& opts,
         std::filesystem::path const& dir, std::ostream& log)
{
    struct Point
    {
        std::size_t qi;
        std::uint32_t rep;
        RunConfig cfg;
        std::filesystem::path dir;
        std::optional<nlohmann::json> summary;
        std::string error;
    };

    auto const& qs = opts.spec.qs;
    std::uint32_t const reps = std::max<std::uint32_t>(opts.spec.replicates, 1);
    std::vector<Point> points;
    for (std::size_t i = 0; i < qs.size(); ++i)
    {
        std::string const qs_ = shortest(qs[i]);
        for (std::uint32_t r = 0; r < reps; ++r)
        {
            RunConfig c = base;
            c.q = qs[i];
            c.seed = base.seed + r;
            c.name = base.name + "-q" + qs_ + "-r" + std::to_string(r);
            points.push_back({i, r, c,
                              dir / ("q_" + qs_) / ("rep_" + std::to_string(r)),
                              std::nullopt, {}});
        }
    }

    std::mutex logMutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < points.size();)
        {
            auto& pt = points[k];
            try
            {
                validate(pt.cfg);
                pt.summary = runToDirectory(pt.cfg, pt.dir, RunOptions{opts.decimal});
            }
            catch (std::exception const& e)
            {
                pt.error = e.what();
            }
            std::lock_guard lock(logMutex);
            if (pt.summary)
                log << "done " << pt.dir.string() << '\n';
            else
                log << "FAILED " << pt.dir.string() << ": " << pt.error << '\n';
        }
    };
    unsigned const jobs = std::max(1u, opts.jobs);
    if (jobs == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < std::min<std::size_t>(jobs, points.size()); ++j)
            pool.emplace_back(worker);
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir.string() + ": " + ec.message());
    std::ofstream agg(dir / kAggregateFile, std::ios::binary);
    agg << kAggregateHeader << '\n';
    std::size_t failed = 0;
    for (std::size_t i = 0; i < qs.size(); ++i)
    {
        double excess = 0, tax = 0, ratioSum = 0, ratioMax = 0;
        std::uint32_t done = 0, withRatio = 0;
        for (auto const& pt : points)
        {
            if (pt.qi != i)
                continue;
            if (!pt.summary)
            {
                ++failed;
                continue;
            }
            auto const& f = (*pt.summary)["final_decimal"];
            double const e = f["excess"].get<double>();
            double const x = f["tax_collected"].get<double>();
            excess += e;
            tax += x;
            ++done;
            if (x > 0)
            {
                ratioSum += e / x;
                ratioMax = withRatio ? std::max(ratioMax, e / x) : e / x;
                ++withRatio;
            }
        }
        if (done == 0)
            continue;
        agg << shortest(qs[i]) << ',' << shortest(excess / done) << ','
            << shortest(tax / done) << ','
            << (withRatio ? shortest(ratioSum / withRatio) : "") << ','
            << (withRatio ? shortest(ratioMax) : "") << ',' << done << '\n';
    }
    if (!agg.flush())
        throw IoError("write failed: " + (dir / kAggregateFile).string());
    return failed;
}

// ---------------------------------------------------------------------------

int
runCli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sybil-resistant minting simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "sybilsim 0.1.0");

    Source simSrc;
    Overrides simOv;
    std::optional<std::string> simOut;
    bool simDecimal = false;
    auto* sim = app.add_subcommand("simulate", "run one simulation");
    addSource(*sim, simSrc);
    addOverrides(*sim, simOv, false);
    sim->add_option("--out", simOut,
                    "output directory (default: $SYBILSIM_OUTPUT_ROOT/<name>-seed<seed>)");
    sim->add_flag("--float", simDecimal, "write decimals instead of fractions");

    Source swSrc;
    Overrides swOv;
    std::vector<double> swQ;
    std::optional<std::uint32_t> swReps;
    unsigned swJobs = 1;
    std::optional<std::string> swOut;
    bool swDecimal = false;
    auto* sw = app.add_subcommand("sweep", "run a grid of q values with replicates");
    addSource(*sw, swSrc);
    addOverrides(*sw, swOv, true);
    sw->add_option("--q", swQ, "comma-separated q values")->delimiter(',');
    sw->add_option("--replicates", swReps, "replicates per q (seeds seed..seed+r-1)");
    sw->add_option("--jobs", swJobs, "points run concurrently")
        ->check(CLI::PositiveNumber);
    sw->add_option("--out", swOut,
                   "output directory (default: $SYBILSIM_OUTPUT_ROOT/<name>-seed<seed>)");
    sw->add_flag("--float", swDecimal, "write decimals instead of fractions");

    CheckGraphArgs cg;
    auto* chk = app.add_subcommand("check-graph",
                                   "verify graph invariants and report expansion");
    chk->add_option("file", cg.file, "graph dump ('id type birth' / 'u v' lines)");
    chk->add_flag("--gen", cg.gen, "generate a graph instead of reading one");
    chk->add_option("--honest", cg.honest, "honest identities (with --gen)");
    chk->add_option("--corrupt", cg.corrupt, "corrupt identities (with --gen)");
    chk->add_option("--sybil", cg.sybil, "sybil identities (with --gen)");
    chk->add_option("--degree", cg.degree, "target degree to check");
    chk->add_option("--seed", cg.seed, "RNG seed for generation and sampling");
    chk->add_flag("--approx", cg.approx, "sample the expansion above the exact cap");
    chk->add_option("--samples", cg.samples, "subsets sampled with --approx");
    chk->add_flag("--ratio", cg.ratio, "check type counts against --honest/--corrupt/--sybil");
    chk->add_option("--write", cg.write, "write the graph dump to this file");

    std::optional<std::string> presetName;
    auto* pre = app.add_subcommand("presets", "list presets or show one");
    pre->add_option("name", presetName, "preset to print as JSON");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try
    {
        app.parse(rev);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e, out, err);
    }

    try
    {
        if (*sim)
        {
            RunConfig c = resolve(simSrc, simOv);
            return cmdSimulate(c, outDir(simOut, c), simDecimal, out);
        }
        if (*sw)
        {
            RunConfig c = resolve(swSrc, swOv);
            SweepOptions so;
            if (swSrc.preset)
            {
                if (auto const& ps = findPreset(*swSrc.preset).sweep)
                    so.spec = *ps;
            }
            if (!swQ.empty())
                so.spec.qs = swQ;
            if (so.spec.qs.empty())
                so.spec.qs = {c.q};
            if (swReps)
                so.spec.replicates = *swReps;
            so.jobs = swJobs;
            so.decimal = swDecimal;
            auto const dir = outDir(swOut, c);
            std::size_t failed = runSweep(c, so, dir, err);
            out << "wrote " << (dir / kAggregateFile).string() << '\n';
            if (failed)
            {
                err << failed << " sweep point(s) failed\n";
                return kExitFailure;
            }
            return kExitOk;
        }
        if (*chk)
            return cmdCheckGraph(cg, out, err);
        if (*pre)
            return cmdPresets(presetName, out);
    }
    catch (ConfigError const& e)
    {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (IoError const& e)
    {
        err << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (InvariantViolation const& e)
    {
        err << "invariant violated: " << e.what() << '\n';
        return kExitInvariant;
    }
    catch (std::exception const& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace sybilsim::cli
