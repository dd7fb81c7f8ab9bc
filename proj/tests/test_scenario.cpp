#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ckt/io.hpp"
#include "ckt/runner.hpp"

using namespace ckt;
namespace fs = std::filesystem;

namespace {

const char* minimal_particle = R"(
run.kind = particle
particle.kind = conformal
hamiltonian.name = harmonic
conformal.c = 0.2
integrator.method = rk4
integrator.dt = 1e-3
integrator.T = 10
state.q = 1.0
state.p = 0.0
)";

fs::path temp_dir(const char* tag)
{
    const fs::path dir = fs::temp_directory_path() / (std::string("ckt_test_") + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> manifest_lines_without_timing(const fs::path& manifest)
{
    std::ifstream in(manifest);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"type\":\"timing\"") == std::string::npos)
            lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("scenario happy path")
{
    const ParseResult r = parse_scenario(minimal_particle);
    REQUIRE(r.ok());
    CHECK(r.scenario->kind == Scenario::RunKind::particle);
    CHECK(r.scenario->conformal_c == doctest::Approx(0.2));
    CHECK(r.scenario->dt == doctest::Approx(1e-3));
    CHECK(r.scenario->T == doctest::Approx(10.0));
}

TEST_CASE("scenario schema errors carry line numbers and bounds")
{
    {
        const ParseResult r = parse_scenario("run.kind = particle\nintegrator.dt = 0\n");
        REQUIRE(!r.ok());
        bool found = false;
        for (const SchemaError& e : r.errors)
            found = found || e.message.find("dt must be positive") != std::string::npos;
        CHECK(found);
    }
    {
        std::ostringstream big;
        big << "run.kind = kinetic_density\nkinetic.model = vlasov\nkinetic.steps = 1\n"
            << "grid.q.min = -1\ngrid.q.max = 1\ngrid.q.cells = 40000\n"
            << "grid.p.min = -1\ngrid.p.max = 1\ngrid.p.cells = 40000\n";
        const ParseResult r = parse_scenario(big.str());
        REQUIRE(!r.ok());
        bool found = false;
        for (const SchemaError& e : r.errors)
            found = found || e.message.find("2^27") != std::string::npos;
        CHECK(found);
    }
    {
        const ParseResult r = parse_scenario("run.kind = particle\nbogus.key = 1\n");
        REQUIRE(!r.ok());
        REQUIRE(r.errors.size() == 1);
        CHECK(r.errors[0].line == 2);
        CHECK(r.errors[0].message.find("unknown key") != std::string::npos);
    }
    {
        const ParseResult r = parse_scenario("hamiltonian.name = harmonic\n");
        REQUIRE(!r.ok());
        bool found = false;
        for (const SchemaError& e : r.errors)
            found = found || e.message.find("run.kind") != std::string::npos;
        CHECK(found);
    }
}

TEST_CASE("grid arity schema checks")
{
    const char* momentum_contact_no_z = R"(
run.kind = kinetic_momentum
kinetic.model = contact_vf
kinetic.steps = 1
grid.q.min = -1
grid.q.max = 1
grid.q.cells = 8
grid.p.min = -1
grid.p.max = 1
grid.p.cells = 8
)";
    const ParseResult r = parse_scenario(momentum_contact_no_z);
    REQUIRE(!r.ok());
    bool found = false;
    for (const SchemaError& e : r.errors)
        found = found || e.message.find("grid.z") != std::string::npos;
    CHECK(found);

    const char* vlasov_with_z = R"(
run.kind = kinetic_density
kinetic.model = vlasov
kinetic.steps = 1
grid.q.min = -1
grid.q.max = 1
grid.q.cells = 8
grid.p.min = -1
grid.p.max = 1
grid.p.cells = 8
grid.z.min = -1
grid.z.max = 1
grid.z.cells = 8
)";
    const ParseResult r2 = parse_scenario(vlasov_with_z);
    REQUIRE(!r2.ok());
    bool found2 = false;
    for (const SchemaError& e : r2.errors)
        found2 = found2 || e.message.find("only valid for contact") != std::string::npos;
    CHECK(found2);
}

TEST_CASE("polynomial hamiltonian parsing")
{
    HamiltonianSpec spec;
    spec.builtin = HamiltonianSpec::Builtin::polynomial;
    spec.poly_text = "0.5*q^2 + 0.5*p^2 - 0.1*q*p";
    const ScalarFunction H = build_hamiltonian(spec);
    CHECK(H.value(Vec{1.0, 2.0}) == doctest::Approx(0.5 + 2.0 - 0.2));
    const Vec g = H.gradient(Vec{1.0, 2.0});
    CHECK(g[0] == doctest::Approx(1.0 - 0.2));
    CHECK(g[1] == doctest::Approx(2.0 - 0.1));

    HamiltonianSpec plasma;
    plasma.builtin = HamiltonianSpec::Builtin::plasma;
    plasma.mass = 2.0;
    plasma.charge = -1.0;
    plasma.phi_text = "q^2";
    const ScalarFunction Hp = build_hamiltonian(plasma);
    CHECK(Hp.value(Vec{3.0, 4.0}) == doctest::Approx(16.0 / 4.0 - 9.0));
}

TEST_CASE("csv quoting and number formatting")
{
    CHECK(csv_quote("plain") == "plain");
    CHECK(csv_quote("a,b") == "\"a,b\"");
    CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-0.0) == "-0");
    const double v = 0.1 + 0.2;
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("pgm heatmap puts peak gray at the mode cell")
{
    const GridSpec spec = GridSpec::symplectic({-2.0, 2.0, 16, Boundary::truncated},
                                               {-2.0, 2.0, 16, Boundary::truncated});
    DensityGrid f(spec);
    f.values = sample_on_grid(spec, [](std::span<const double> x) {
        const double dq = x[0] - 0.625, dp = x[1] + 0.375;
        return std::exp(-4.0 * (dq * dq + dp * dp));
    });
    const fs::path dir = temp_dir("pgm");
    write_pgm_heatmap(dir / "f.pgm", f);
    std::ifstream in(dir / "f.pgm", std::ios::binary);
    std::string magic;
    std::size_t w, h, maxv;
    in >> magic >> w >> h >> maxv;
    CHECK(magic == "P5");
    CHECK(w == 16);
    CHECK(h == 16);
    in.get();
    std::vector<unsigned char> pixels(w * h);
    in.read(reinterpret_cast<char*>(pixels.data()), static_cast<std::streamsize>(w * h));
    std::size_t arg = 0;
    for (std::size_t i = 0; i < pixels.size(); ++i)
        if (pixels[i] > pixels[arg])
            arg = i;
    // mode at q = 0.625 (iq = 10), p = -0.375 (ip = 6); row 0 is p max
    const std::size_t row = arg / w, col = arg % w;
    CHECK(col == 10);
    CHECK(15 - row == 6);
    CHECK(pixels[arg] == 255);
}

TEST_CASE("svg plot rejects empty input")
{
    const fs::path dir = temp_dir("svg");
    CHECK_THROWS_WITH_AS(write_svg_lineplot(dir / "x.svg", "t", {}), "no data",
                         std::invalid_argument);
    PlotSeries s{"s", {0.0, 1.0}, {1.0, 2.0}};
    write_svg_lineplot(dir / "ok.svg", "t", {s});
    CHECK(fs::file_size(dir / "ok.svg") > 200);
}

TEST_CASE("particle run produces a manifest with passing checks")
{
    const ParseResult r = parse_scenario(minimal_particle);
    REQUIRE(r.ok());
    const fs::path dir = temp_dir("particle");
    RunOptions opts;
    opts.out_dir = dir.string();
    const RunManifest manifest = run_scenario(*r.scenario, opts);
    CHECK(manifest.exit_code() == 0);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "energy.svg"));
    CHECK(fs::exists(dir / "manifest.jsonl"));

    // every emitted file appears in the manifest with its hash
    std::ifstream in(dir / "manifest.jsonl");
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(all.find("trajectory.csv") != std::string::npos);
    CHECK(all.find("fnv64") != std::string::npos);
}

TEST_CASE("manifests are reproducible across thread counts")
{
    const char* text = R"(
run.kind = kinetic_density
kinetic.model = conformal
conformal.c = 0.3
kinetic.steps = 5
integrator.dt = 2e-3
grid.q.min = -4
grid.q.max = 4
grid.q.cells = 32
grid.p.min = -4
grid.p.max = 4
grid.p.cells = 32
initial.sigma = 0.5,0.5
)";
    const ParseResult r = parse_scenario(text);
    REQUIRE(r.ok());
    const fs::path dir1 = temp_dir("threads1");
    const fs::path dir4 = temp_dir("threads4");
    RunOptions o1, o4;
    o1.out_dir = dir1.string();
    o1.threads = 1;
    o4.out_dir = dir4.string();
    o4.threads = 4;
    const RunManifest m1 = run_scenario(*r.scenario, o1);
    const RunManifest m4 = run_scenario(*r.scenario, o4);
    CHECK(m1.exit_code() == 0);
    CHECK(m4.exit_code() == 0);
    auto l1 = manifest_lines_without_timing(dir1 / "manifest.jsonl");
    auto l4 = manifest_lines_without_timing(dir4 / "manifest.jsonl");
    REQUIRE(l1.size() == l4.size());
    for (std::size_t i = 0; i < l1.size(); ++i) {
        // the scenario echo records the thread count; every numeric line
        // must be byte-identical
        if (l1[i].find("\"type\":\"scenario\"") != std::string::npos)
            continue;
        CHECK(l1[i] == l4[i]);
    }
}

TEST_CASE("conformal c=0 kinetic run hashes equal the vlasov run hashes")
{
    auto scenario_text = [](const char* model) {
        std::ostringstream os;
        os << "run.kind = kinetic_density\nkinetic.model = " << model
           << "\nconformal.c = 0\nkinetic.steps = 4\nintegrator.dt = 2e-3\n"
           << "grid.q.min = -4\ngrid.q.max = 4\ngrid.q.cells = 32\n"
           << "grid.p.min = -4\ngrid.p.max = 4\ngrid.p.cells = 32\n";
        return os.str();
    };
    const ParseResult rv = parse_scenario(scenario_text("vlasov"));
    const ParseResult rc = parse_scenario(scenario_text("conformal"));
    REQUIRE(rv.ok());
    REQUIRE(rc.ok());
    const fs::path dv = temp_dir("vlasov");
    const fs::path dc = temp_dir("conf0");
    RunOptions ov, oc;
    ov.out_dir = dv.string();
    oc.out_dir = dc.string();
    run_scenario(*rv.scenario, ov);
    run_scenario(*rc.scenario, oc);
    CHECK(fnv1a64_file(dv / "f_4.csv") == fnv1a64_file(dc / "f_4.csv"));
    CHECK(fnv1a64_file(dv / "f_4.pgm") == fnv1a64_file(dc / "f_4.pgm"));
}

TEST_CASE("contact momentum scenario runs end to end")
{
    const char* text = R"(
run.kind = kinetic_momentum
kinetic.model = contact_vf
hamiltonian.name = harmonic
conformal.c = 0.2
kinetic.steps = 5
integrator.dt = 2e-3
grid.q.min = -3
grid.q.max = 3
grid.q.cells = 16
grid.q.boundary = truncated
grid.p.min = -3
grid.p.max = 3
grid.p.cells = 16
grid.z.min = -3
grid.z.max = 3
grid.z.cells = 16
initial.sigma = 0.4,0.4,0.4
initial.oneform_amplitude = 1.0,0.5,0.25
)";
    const ParseResult r = parse_scenario(text);
    REQUIRE(r.ok());
    RunOptions opts;
    opts.out_dir = temp_dir("momentum_contact").string();
    const RunManifest m = run_scenario(*r.scenario, opts);
    CHECK(m.exit_code() == 0);
    CHECK(fs::exists(fs::path(*opts.out_dir) / "pi_5.csv"));
    CHECK(fs::exists(fs::path(*opts.out_dir) / "f_mapped.csv"));
}

TEST_CASE("exit codes reflect check failures and aborts")
{
    // a coarsely resolved Hamiltonian run fails the energy-conservation
    // check: exit 2
    const char* drifty = R"(
run.kind = particle
particle.kind = hamiltonian
integrator.dt = 0.5
integrator.T = 5
state.q = 1.0
state.p = 0.0
)";
    const ParseResult r2 = parse_scenario(drifty);
    REQUIRE(r2.ok());
    RunOptions o2;
    o2.out_dir = temp_dir("exit2").string();
    CHECK(run_scenario(*r2.scenario, o2).exit_code() == 2);

    // a blow-up aborts the run: exit 4
    const char* blowup = R"(
run.kind = particle
particle.kind = conformal
conformal.c = 50
integrator.dt = 0.01
integrator.T = 10
state.q = 0.0
state.p = 1.0
)";
    const ParseResult r4 = parse_scenario(blowup);
    REQUIRE(r4.ok());
    RunOptions o4;
    o4.out_dir = temp_dir("exit4").string();
    const RunManifest m4 = run_scenario(*r4.scenario, o4);
    CHECK(m4.aborted);
    CHECK(m4.exit_code() == 4);
}

TEST_CASE("verify run emits five homomorphism records plus bracket identities")
{
    const char* text = "run.kind = verify\nverify.instances = 3\nseed = 9\n";
    const ParseResult r = parse_scenario(text);
    REQUIRE(r.ok());
    const fs::path dir = temp_dir("verify");
    RunOptions opts;
    opts.out_dir = dir.string();
    const RunManifest manifest = run_scenario(*r.scenario, opts);
    CHECK(manifest.exit_code() == 0);
    std::ifstream in(dir / "verify.jsonl");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        ++lines;
    CHECK(lines == 8); // 5 homomorphism kinds + jacobi x2 + leibniz
}
