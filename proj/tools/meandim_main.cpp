// Command-line front end: widim / mdim / castle / embed / verify.
// Exit codes: 0 success, 1 usage or config error, 2 certification failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "meandim/json_io.hpp"
#include "meandim/substitution.hpp"

namespace fs = std::filesystem;
using namespace meandim;
using meandim::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitUncertified = 2;

std::string out_dir_override(const std::string& flag_value) {
    if (const char* env = std::getenv("MEANDIM_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return flag_value;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

// minimal plot helpers; exact rationals are rendered through to_double
std::string svg_header(int w, int h) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
       << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    return os.str();
}

std::string witness_svg(const BoxCover& cover) {
    const int size = 400, pad = 20;
    std::ostringstream os;
    os << svg_header(size + 2 * pad, size + 2 * pad);
    for (const Box& b : cover.boxes) {
        double x0 = 0, y0 = 0, x1 = 1, y1 = 1;
        if (b.dim() >= 1) {
            x0 = to_double(b.lo[0]);
            x1 = to_double(b.hi[0]);
        }
        if (b.dim() >= 2) {
            y0 = to_double(b.lo[1]);
            y1 = to_double(b.hi[1]);
        }
        os << "<rect x=\"" << pad + x0 * size << "\" y=\"" << pad + (1 - y1) * size
           << "\" width=\"" << (x1 - x0) * size << "\" height=\"" << (y1 - y0) * size
           << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string curve_svg(const std::vector<MdimSample>& curve) {
    const int w = 480, h = 320, pad = 40;
    double ymax = 0;
    for (const auto& s : curve) ymax = std::max(ymax, to_double(s.normalized));
    if (ymax <= 0) ymax = 1;
    std::ostringstream os;
    os << svg_header(w, h) << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (const auto& s : curve) {
        double x = pad + (w - 2.0 * pad) * (static_cast<double>(s.n) - 1) /
                             std::max<double>(1, static_cast<double>(curve.back().n) - 1);
        double y = h - pad - (h - 2.0 * pad) * to_double(s.normalized) / ymax;
        os << x << "," << y << " ";
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

std::string scatter_svg(const std::vector<PairRecord>& pairs) {
    const int w = 480, h = 320, pad = 40;
    double xmax = 0, ymax = 0;
    for (const auto& p : pairs) {
        xmax = std::max(xmax, to_double(p.dist));
        ymax = std::max(ymax, to_double(p.separation));
    }
    if (xmax <= 0) xmax = 1;
    if (ymax <= 0) ymax = 1;
    std::ostringstream os;
    os << svg_header(w, h);
    for (const auto& p : pairs) {
        double x = pad + (w - 2.0 * pad) * to_double(p.dist) / xmax;
        double y = h - pad - (h - 2.0 * pad) * to_double(p.separation) / ymax;
        os << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\""
           << (p.violates ? "red" : "black") << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

FiniteWindow parse_window(const std::string& s) {
    // "a..b" interval or comma-separated list
    if (auto dots = s.find(".."); dots != std::string::npos) {
        long a = std::stol(s.substr(0, dots));
        long b = std::stol(s.substr(dots + 2));
        return FiniteWindow::interval(a, b);
    }
    std::vector<long> elems;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) elems.push_back(std::stol(item));
    return FiniteWindow(std::move(elems));
}

struct WidimArgs {
    std::string epsilon, window = "0..0", mode = "exact", out = ".";
    int k = 1, grid = 3;
    bool svg = false;
};

int run_widim(const WidimArgs& a) {
    const MetricConfig mc;
    Rational eps = parse_rational(a.epsilon);
    FiniteWindow f = parse_window(a.window);
    WeightedCube cube = reduce_to_cube(f, eps, a.k, mc);
    WidimResult r = a.mode == "exact" ? widim_exact(cube, eps, a.grid)
                                      : widim_greedy(cube, eps);
    json config{{"subcommand", "widim"}, {"epsilon", a.epsilon}, {"window", a.window},
                {"k", a.k},             {"mode", a.mode},        {"grid", a.grid}};
    std::string hash = io::config_hash(config);
    fs::path dir = out_dir_override(a.out);
    fs::create_directories(dir);
    json result = io::widim_result_to_json(r);
    result["config"] = config;
    write_json(dir / ("widim_" + hash + ".json"), result);
    if (a.svg && cube.dim() <= 2 && r.stats.witness_materialized)
        write_file(dir / ("widim_" + hash + ".svg"), witness_svg(r.witness));
    std::cout << "widim = " << r.value << " ("
              << (r.kind == WidimKind::exact ? "exact" : "upper bound") << ")\n";
    return kExitOk;
}

struct MdimArgs {
    std::string epsilon, out = ".";
    int k = 1;
    long n_max = 16;
    std::string mode = "greedy";
    bool svg = false;
};

int run_mdim(const MdimArgs& a) {
    const MetricConfig mc;
    Rational eps = parse_rational(a.epsilon);
    auto curve = mdim_curve(eps, a.k, mc,
                            a.n_max, a.mode == "exact" ? WidimMode::exact : WidimMode::greedy);
    json config{{"subcommand", "mdim"}, {"epsilon", a.epsilon}, {"k", a.k},
                {"n_max", a.n_max},     {"mode", a.mode}};
    std::string hash = io::config_hash(config);
    fs::path dir = out_dir_override(a.out);
    fs::create_directories(dir);
    json samples = json::array();
    std::ostringstream csv;
    csv << "n,phi_over_n\n";
    for (const auto& s : curve) {
        samples.push_back(json{{"n", s.n}, {"value", dyadic_to_string(s.normalized)}});
        csv << s.n << "," << rational_to_string(s.normalized) << "\n";
    }
    write_json(dir / ("mdim_" + hash + ".json"), json{{"config", config}, {"curve", samples}});
    write_file(dir / ("mdim_" + hash + ".csv"), csv.str());
    if (a.svg) write_file(dir / ("mdim_" + hash + ".svg"), curve_svg(curve));
    std::cout << "mdim curve written; final value " << rational_to_string(curve.back().normalized)
              << "\n";
    return kExitOk;
}

struct CastleBuildArgs {
    std::string system = "odometer", word = "a", out = ".";
    int level = 3;
    long horizon = 500;
};

int run_castle_build(const CastleBuildArgs& a) {
    Castle c;
    json config{{"subcommand", "castle-build"}, {"system", a.system}};
    if (a.system == "odometer") {
        c = odometer_castle(a.level);
        config["level"] = a.level;
    } else if (a.system == "fibonacci") {
        c = returnword_castle(SubstitutionSystem::fibonacci(), a.word, a.horizon);
        config["word"] = a.word;
        config["horizon"] = a.horizon;
    } else {
        std::cerr << "unknown system: " << a.system << "\n";
        return kExitUsage;
    }
    std::string hash = io::config_hash(config);
    fs::path dir = out_dir_override(a.out);
    fs::create_directories(dir);
    json result = io::castle_to_json(c);
    result["config"] = config;
    write_json(dir / ("castle_" + hash + ".json"), result);
    std::cout << "castle with " << c.towers.size() << " tower(s), " << c.level_count()
              << " level(s)\n";
    return kExitOk;
}

struct CastleVerifyArgs {
    std::string input, k = "-1,0,1", delta = "1/8", system, out = ".";
    long horizon = 500;
};

int run_castle_verify(const CastleVerifyArgs& a) {
    std::ifstream in(a.input);
    if (!in) {
        std::cerr << "cannot read castle file: " << a.input << "\n";
        return kExitUsage;
    }
    json j = json::parse(in, nullptr, true);
    if (j.contains("config")) j.erase("config");
    Castle c = io::castle_from_json(j);
    InvarianceParams inv{parse_window(a.k), parse_rational(a.delta)};
    std::unique_ptr<SubstitutionSystem> sub;
    if (a.system == "fibonacci") sub = std::make_unique<SubstitutionSystem>(SubstitutionSystem::fibonacci());
    CastleCheckReport rep = verify_castle(c, inv, sub.get(), a.horizon);
    json config{{"subcommand", "castle-verify"}, {"input", a.input}, {"k", a.k},
                {"delta", a.delta},              {"system", a.system}};
    std::string hash = io::config_hash(config);
    fs::path dir = out_dir_override(a.out);
    fs::create_directories(dir);
    write_json(dir / ("castle_verify_" + hash + ".json"), io::castle_report_to_json(rep));
    for (const auto& d : rep.diagnostics) std::cout << d << "\n";
    std::cout << (rep.ok() ? "castle verified" : "castle verification FAILED") << "\n";
    return rep.ok() ? kExitOk : kExitUncertified;
}

struct EmbedArgs {
    std::string config_path, out = ".";
    bool svg = false;
};

std::string pairs_csv(const EmbeddingCertificate& cert) {
    std::ostringstream csv;
    csv << "pair_a,pair_b,dist_x,weighted_separation,violates\n";
    for (const auto& p : cert.worst_pairs)
        csv << p.a << "," << p.b << "," << rational_to_string(p.dist) << ","
            << rational_to_string(p.separation) << "," << (p.violates ? 1 : 0) << "\n";
    return csv.str();
}

int run_embed(const EmbedArgs& a, json* replay_out = nullptr) {
    std::ifstream in(a.config_path);
    if (!in) {
        std::cerr << "cannot read config: " << a.config_path << "\n";
        return kExitUsage;
    }
    json cfg_json = json::parse(in, nullptr, true);
    PipelineConfig cfg = io::pipeline_config_from_json(cfg_json);
    std::string hash = io::config_hash(io::pipeline_config_to_json(cfg));
    fs::path dir = out_dir_override(a.out);
    fs::create_directories(dir);
    try {
        PipelineResult res = run_pipeline(cfg);
        json result = io::pipeline_result_to_json(res);
        if (replay_out) *replay_out = result;
        write_json(dir / ("embed_" + hash + ".certificate.json"), result);
        write_file(dir / ("embed_" + hash + ".pairs.csv"), pairs_csv(res.certificate));
        std::ostringstream report;
        for (const auto& l : res.report) report << l << "\n";
        write_file(dir / ("embed_" + hash + ".report.txt"), report.str());
        if (a.svg)
            write_file(dir / ("embed_" + hash + ".svg"),
                       scatter_svg(res.certificate.worst_pairs));
        std::cout << report.str();
        return kExitOk;
    } catch (const PipelineError& e) {
        json failure{{"certified", false}, {"stage", e.stage}, {"error", e.what()}};
        if (replay_out) *replay_out = failure;
        write_json(dir / ("embed_" + hash + ".certificate.json"), failure);
        std::cout << "certification failed at stage " << e.stage << ": " << e.what() << "\n";
        return kExitUncertified;
    }
}

struct VerifyArgs {
    std::string config_path, certificate_path;
};

int run_verify(const VerifyArgs& a) {
    std::ifstream cin_(a.certificate_path);
    if (!cin_) {
        std::cerr << "cannot read certificate: " << a.certificate_path << "\n";
        return kExitUsage;
    }
    json recorded = json::parse(cin_, nullptr, true);
    fs::path tmp = fs::temp_directory_path() / "meandim_verify";
    EmbedArgs ea;
    ea.config_path = a.config_path;
    ea.out = tmp.string();
    json replayed;
    int rc = run_embed(ea, &replayed);
    if (rc == kExitUsage) return rc;
    if (replayed == recorded) {
        std::cout << "certificate reproduced byte-for-byte\n";
        return kExitOk;
    }
    std::cout << "certificate MISMATCH against " << a.certificate_path << "\n";
    return kExitUncertified;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean dimension and embedding toolkit"};
    app.require_subcommand(1);

    WidimArgs wa;
    auto* widim = app.add_subcommand("widim", "widim of a reduced weighted cube");
    widim->add_option("--epsilon", wa.epsilon, "scale, e.g. 1/2")->required();
    widim->add_option("--window", wa.window, "a..b or comma list");
    widim->add_option("--k", wa.k, "cube dimension per step");
    widim->add_option("--mode", wa.mode)->check(CLI::IsMember({"exact", "greedy"}));
    widim->add_option("--grid", wa.grid, "grid resolution (exact mode)");
    widim->add_option("--out", wa.out, "output directory");
    widim->add_flag("--svg", wa.svg, "emit witness SVG (dim <= 2)");

    MdimArgs ma;
    auto* mdim = app.add_subcommand("mdim", "normalized widim along Folner intervals");
    mdim->add_option("--epsilon", ma.epsilon)->required();
    mdim->add_option("--k", ma.k);
    mdim->add_option("--n-max", ma.n_max);
    mdim->add_option("--mode", ma.mode)->check(CLI::IsMember({"exact", "greedy"}));
    mdim->add_option("--out", ma.out);
    mdim->add_flag("--svg", ma.svg);

    auto* castle = app.add_subcommand("castle", "build or verify clopen castles");
    castle->require_subcommand(1);
    CastleBuildArgs cba;
    auto* cbuild = castle->add_subcommand("build");
    cbuild->add_option("--system", cba.system)->check(CLI::IsMember({"odometer", "fibonacci"}));
    cbuild->add_option("--level", cba.level, "odometer castle rank");
    cbuild->add_option("--word", cba.word, "return-word base (fibonacci)");
    cbuild->add_option("--horizon", cba.horizon);
    cbuild->add_option("--out", cba.out);
    CastleVerifyArgs cva;
    auto* cverify = castle->add_subcommand("verify");
    cverify->add_option("--input", cva.input, "castle JSON")->required();
    cverify->add_option("--k", cva.k, "invariance probe window");
    cverify->add_option("--delta", cva.delta);
    cverify->add_option("--system", cva.system, "subshift castles need their system");
    cverify->add_option("--horizon", cva.horizon);
    cverify->add_option("--out", cva.out);

    EmbedArgs ea;
    auto* embed = app.add_subcommand("embed", "run the embedding pipeline");
    embed->add_option("--config", ea.config_path, "pipeline config JSON")->required();
    embed->add_option("--out", ea.out);
    embed->add_flag("--svg", ea.svg);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "re-run a config and compare certificates");
    verify->add_option("--config", va.config_path)->required();
    verify->add_option("--certificate", va.certificate_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (widim->parsed()) return run_widim(wa);
        if (mdim->parsed()) return run_mdim(ma);
        if (castle->parsed()) {
            if (cbuild->parsed()) return run_castle_build(cba);
            return run_castle_verify(cva);
        }
        if (embed->parsed()) return run_embed(ea);
        if (verify->parsed()) return run_verify(va);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
