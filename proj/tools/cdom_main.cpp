// Command-line front end: construct scenes, run verification suites, evaluate
// capacity and modulus estimates, explore the inversion group, render SVG.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cdom/capacity.hpp"
#include "cdom/json_io.hpp"
#include "cdom/modulus.hpp"
#include "cdom/render.hpp"
#include "cdom/schottky.hpp"
#include "cdom/verify.hpp"

namespace {

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw cdom::numeric_error("cannot open output file " + out_path);
    f << content;
}

cdom::SceneMode parse_mode(const std::string& m) {
    if (m == "exact") return cdom::SceneMode::exact;
    if (m == "presentation") return cdom::SceneMode::presentation;
    throw CLI::ValidationError("--mode", "expected 'exact' or 'presentation'");
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circle-domain construction and verification toolkit"};
    app.set_config("--config", "", "configuration file (flags override)");
    app.require_subcommand(1);

    std::string out_path;
    app.add_option("--out", out_path, "output path ('-' for stdout)")->capture_default_str();

    // construct
    auto* c_construct = app.add_subcommand("construct", "build a scene and write its JSON");
    int depth = 1;
    std::string mode = "exact";
    c_construct->add_option("--depth", depth, "generation depth");
    c_construct->add_option("--mode", mode, "exact|presentation");

    // verify
    auto* c_verify = app.add_subcommand("verify", "run verification suites");
    std::string suites = "all";
    c_verify->add_option("--suites", suites,
                         "comma list: params,scene,neighbors,modulus,capacity,schottky,all");

    // capacity
    auto* c_capacity = app.add_subcommand("capacity", "capacity series and numeric estimates");
    int levels = 2;
    std::string cap_mode = "actual";
    int cap_nodes = 512;
    c_capacity->add_option("--levels", levels, "truncation level");
    c_capacity->add_option("--mode", cap_mode, "formula|actual|numeric");
    c_capacity->add_option("--nodes", cap_nodes, "discretization for numeric mode");

    // modulus
    auto* c_modulus = app.add_subcommand("modulus", "modulus closed forms and grid estimates");
    std::string mod_case = "square";
    double arg_w = 1.0, arg_h = 1.0, arg_s1 = 1.0, arg_s2 = M_E;
    int grid = 256;
    std::string word_str = "(Le,1)";
    c_modulus->add_option("--case", mod_case, "square|rect|annulus|gamma");
    c_modulus->add_option("--width", arg_w, "rectangle width");
    c_modulus->add_option("--height", arg_h, "rectangle height");
    c_modulus->add_option("--s1", arg_s1, "inner radius");
    c_modulus->add_option("--s2", arg_s2, "outer radius");
    c_modulus->add_option("--grid", grid, "grid resolution");
    c_modulus->add_option("--word", word_str, "word for the gamma case");

    // schottky
    auto* c_schottky = app.add_subcommand("schottky", "reduced words, image disks, nests");
    int max_len = 2;
    std::string nest_ids;
    int nest_depth = 0;
    c_schottky->add_option("--max-word-length", max_len, "maximum reduced-word length");
    c_schottky->add_option("--nest", nest_ids, "comma list of generator ids");
    c_schottky->add_option("--depth", nest_depth, "nest depth J");

    // render
    auto* c_render = app.add_subcommand("render", "render a scene JSON to SVG");
    std::string scene_path, window_str = "-4,-1,4,2", chain_word;
    c_render->add_option("--scene", scene_path, "scene JSON path")->required();
    c_render->add_option("--window", window_str, "x0,y0,x1,y1");
    c_render->add_option("--chain", chain_word, "overlay the neighbor chain of this word");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        using namespace cdom;
        if (*c_construct) {
            SceneGraph sc = generation(depth, parse_mode(mode));
            write_output(out_path, scene_to_json(sc).dump(2) + "\n");
            return 0;
        }
        if (*c_verify) {
            SceneGraph sc = generation(1, SceneMode::exact);
            auto reports = run_suites(split_csv(suites), sc);
            ojson j;
            j["suites"] = ojson::array();
            bool ok = true;
            std::size_t checks = 0;
            for (const auto& r : reports) {
                j["suites"].push_back(report_to_json(r));
                ok = ok && r.all_ok();
                checks += r.checks.size();
            }
            j["total_checks"] = checks;
            j["ok"] = ok;
            write_output(out_path, j.dump(2) + "\n");
            return ok ? 0 : 1;
        }
        if (*c_capacity) {
            std::vector<LevelParams> params = {initial_params()};
            while (static_cast<int>(params.size()) < levels)
                params.push_back(next_params(params.back()));
            ojson j;
            j["levels"] = levels;
            j["mode"] = cap_mode;
            if (cap_mode == "formula" || cap_mode == "actual") {
                CapacitySeries cs = jinta_sum(
                    params, levels,
                    cap_mode == "formula" ? SeriesMode::formula : SeriesMode::actual);
                j["S"] = to_json(cs.S);
                j["tail"] = to_json(cs.tail);
                j["bound"] = to_json(cs.bound);
                j["verdict"] = cs.verdict ? "pass" : "fail";
                ojson terms = ojson::array();
                for (const auto& t : cs.terms) terms.push_back(to_json(t));
                j["terms"] = std::move(terms);
                write_output(out_path, j.dump(2) + "\n");
                return cs.verdict ? 0 : 1;
            }
            if (cap_mode == "numeric") {
                // complement of the level-1 gaps in [0,1]; deeper gaps are far
                // below any floating-point resolution
                Census cen = removed_intervals(params, 1);
                std::vector<Interval> comp;
                NumericValue lo = NumericValue::rational(0);
                for (const auto& gap : cen.levels[0].intervals) {
                    comp.push_back({lo, gap.lo});
                    lo = gap.hi;
                }
                comp.push_back({lo, NumericValue::rational(1)});
                double est = equilibrium_capacity(comp, cap_nodes);
                j["note"] = "equilibrium estimate of the level-1 complement; as a subset "
                            "of [0,1] its capacity cannot exceed 1/4 (up to grid error)";
                j["estimate"] = est;
                bool ok = est <= 0.25 * 1.005;
                j["verdict"] = ok ? "pass" : "fail";
                write_output(out_path, j.dump(2) + "\n");
                return ok ? 0 : 1;
            }
            throw CLI::ValidationError("--mode", "expected formula|actual|numeric");
        }
        if (*c_modulus) {
            ojson j;
            j["case"] = mod_case;
            j["grid"] = grid;
            if (mod_case == "square" || mod_case == "rect") {
                double w = mod_case == "square" ? 1.0 : arg_w;
                double h = mod_case == "square" ? 1.0 : arg_h;
                j["closed_form"] = h / w;
                j["estimate"] = discrete_rect_modulus(w, h, grid);
            } else if (mod_case == "annulus") {
                j["closed_form"] = 2.0 * M_PI / std::log(arg_s2 / arg_s1);
                j["estimate"] = discrete_annulus_modulus(arg_s1, arg_s2, grid);
            } else if (mod_case == "gamma") {
                SceneGraph sc = generation(1, SceneMode::exact);
                SurroundingReport sr = surrounding_families(sc, parse_word(word_str));
                ojson fams = ojson::array();
                for (const auto& f : sr.families) {
                    ojson fj;
                    fj["label"] = f.label;
                    fj["kind"] = to_string(f.family.kind);
                    fj["bound"] = to_json(f.bound);
                    fams.push_back(std::move(fj));
                }
                j["families"] = std::move(fams);
                j["checks"] = report_to_json(sr.checks);
            } else {
                throw CLI::ValidationError("--case", "expected square|rect|annulus|gamma");
            }
            write_output(out_path, j.dump(2) + "\n");
            return 0;
        }
        if (*c_schottky) {
            SceneGraph sc = generation(1, SceneMode::exact);
            std::vector<SDisk> gens;
            for (const auto& e : sc.level(1)) {
                gens.push_back(to_sdisk(e.disks[0]));
                gens.push_back(to_sdisk(e.disks[1]));
            }
            ojson j;
            j["generators"] = ojson::array();
            for (const auto& g : gens)
                j["generators"].push_back({{"x", g.x}, {"y", g.y}, {"r", g.r}});
            ojson words = ojson::array();
            for (const auto& wi : enumerate_words(gens, max_len)) {
                ojson wj;
                wj["word"] = wi.word.str();
                ojson imgs = ojson::array();
                for (std::size_t i = 0; i < wi.images.size(); ++i)
                    imgs.push_back({{"of", wi.image_of[i]},
                                    {"x", wi.images[i].x},
                                    {"y", wi.images[i].y},
                                    {"r", wi.images[i].r}});
                wj["images"] = std::move(imgs);
                words.push_back(std::move(wj));
            }
            j["words"] = std::move(words);
            if (!nest_ids.empty()) {
                std::vector<int> seq;
                for (const auto& tok : split_csv(nest_ids)) seq.push_back(std::stoi(tok));
                int J = nest_depth > 0 ? nest_depth : static_cast<int>(seq.size());
                DiskNest nest = build_nest(gens, seq, J);
                ojson nj;
                nj["disks"] = ojson::array();
                for (const auto& d : nest.disks)
                    nj["disks"].push_back({{"x", d.x}, {"y", d.y}, {"r", d.r}});
                nj["limit"] = {{"x", nest.limit.x}, {"y", nest.limit.y}, {"err", nest.err}};
                j["nest"] = std::move(nj);
            }
            write_output(out_path, j.dump(2) + "\n");
            return 0;
        }
        if (*c_render) {
            std::ifstream f(scene_path);
            if (!f) throw numeric_error("cannot open scene file " + scene_path);
            ojson sj = ojson::parse(f);
            SceneObjects objs = scene_from_json(sj);
            auto parts = split_csv(window_str);
            if (parts.size() != 4)
                throw CLI::ValidationError("--window", "expected x0,y0,x1,y1");
            RenderWindow win{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]),
                             std::stod(parts[3])};
            std::vector<std::pair<double, double>> chain;
            if (!chain_word.empty()) {
                SceneGraph sc = objs.mode == "exact"
                                    ? generation(objs.depth, SceneMode::exact)
                                    : generation(objs.depth, SceneMode::presentation);
                SurroundingReport sr = surrounding_families(sc, parse_word(chain_word));
                chain = assemble_chain(sr).polyline;
            }
            write_output(out_path, render_svg(objs, win, chain));
            return 0;
        }
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
