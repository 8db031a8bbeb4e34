// Command-line interface: single invariant queries, batch tables, the
// verification suites, generating-function checks, and cache persistence.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "twi/twi.hpp"

namespace {

using json = nlohmann::ordered_json;

struct CacheConfig {
    std::optional<std::string> path;

    // TWI_CACHE overrides --cache when set
    void resolve() {
        if (const char* env = std::getenv("TWI_CACHE")) path = std::string(env);
    }

    void load_into(twi::Engine& eng) const {
        if (!path || !std::filesystem::exists(*path)) return;
        std::ifstream is(*path);
        twi::load_cache(eng.cache(), is);
    }

    void save_from(const twi::Engine& eng) const {
        if (!path) return;
        std::ofstream os(*path);
        twi::save_cache(eng.cache(), os);
    }
};

twi::DivisorSpec spec_from_flags(const std::string& surface, const std::string& spec_text,
                                 int k, int d, int d1, int d2, int d3) {
    if (!spec_text.empty()) return twi::parse_divisor_spec(spec_text);
    if (surface == "p2") return {twi::Surface::P2, d, 0, 0, 0};
    if (surface == "p1xp1") return {twi::Surface::P1xP1, 0, d1, d2, 0};
    if (surface == "p2k") {
        if (k < 1 || k > 3) throw std::domain_error("p2k requires --k in 1..3");
        twi::Surface s = k == 1 ? twi::Surface::P2_1
                                : k == 2 ? twi::Surface::P2_2 : twi::Surface::P2_3;
        return {s, d, d1, d2, d3};
    }
    throw std::domain_error("unknown surface '" + surface + "'");
}

int run_compute(const twi::DivisorSpec& spec, const std::string& format,
                const CacheConfig& cache) {
    twi::Engine eng;
    cache.load_into(eng);
    twi::Int value = twi::welschinger(eng, spec);
    cache.save_from(eng);
    twi::XiPolygon p = twi::polygon_of_divisor(spec);
    if (format == "json") {
        json out;
        out["surface"] = twi::surface_tag(spec.surface);
        out["divisor"] = spec.str();
        out["polygon"] = p.canonical_key();
        out["sigma"] = twi::sigma_len(p);
        out["value"] = value.str();
        std::cout << out.dump() << "\n";
    } else if (format == "csv") {
        std::cout << "surface,divisor,polygon,sigma,value\n"
                  << twi::surface_tag(spec.surface) << ',' << spec.str() << ','
                  << p.canonical_key() << ',' << twi::sigma_len(p) << ',' << value << "\n";
    } else {
        std::cout << value << "\n";
    }
    return 0;
}

int run_relative(const std::string& polygon_text, const std::string& alpha_text,
                 const std::string& beta_text, long genus, bool irreducible,
                 const std::string& format, const CacheConfig& cache) {
    twi::XiPolygon p = twi::parse_polygon(polygon_text);
    twi::Seq alpha = twi::Seq::parse(alpha_text);
    twi::Seq beta = twi::Seq::parse(beta_text);
    twi::RelInvKey key(p, alpha, beta, genus,
                       irreducible ? twi::InvKind::Irr : twi::InvKind::Multi);
    twi::Engine eng;
    cache.load_into(eng);
    twi::Int value = eng.eval(key);
    cache.save_from(eng);
    if (format == "json") {
        json out;
        out["polygon"] = p.canonical_key();
        out["alpha"] = alpha.str();
        out["beta"] = beta.str();
        out["genus"] = genus;
        out["kind"] = twi::kind_tag(key.kind);
        out["value"] = value.str();
        std::cout << out.dump() << "\n";
    } else {
        std::cout << value << "\n";
    }
    return 0;
}

int run_table(const std::string& surface, int max_d, int max, int threads,
              const std::string& format, const CacheConfig& cache) {
    std::vector<twi::DivisorSpec> cells;
    if (surface == "p2") {
        for (int d = 1; d <= max_d; ++d) cells.push_back({twi::Surface::P2, d, 0, 0, 0});
    } else if (surface == "p1xp1") {
        for (int a = 1; a <= max; ++a)
            for (int b = 1; b <= max; ++b)
                cells.push_back({twi::Surface::P1xP1, 0, a, b, 0});
    } else if (surface == "p2k") {
        for (const twi::DivisorSpec& s : twi::ample_specs_in_box(max_d, max_d))
            if (s.blowups() >= 1) cells.push_back(s);
    } else {
        throw std::domain_error("table: unknown surface '" + surface + "'");
    }

    twi::Engine::Options opt;
    if (threads > 1) opt.cache_mode = twi::MemoCache::Mode::Shared;
    twi::Engine eng(opt);
    cache.load_into(eng);
    std::vector<twi::Int> values(cells.size());
    if (threads > 1) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(1); i < cells.size();
                 i = next.fetch_add(1))
                values[i] = twi::welschinger(eng, cells[i]);
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t i = 0; i < cells.size(); ++i)
            values[i] = twi::welschinger(eng, cells[i]);
    }
    cache.save_from(eng);

    if (format == "json") {
        json rows = json::array();
        for (std::size_t i = 0; i < cells.size(); ++i) {
            json row;
            row["divisor"] = cells[i].str();
            row["value"] = values[i].str();
            rows.push_back(row);
        }
        json out;
        out["surface"] = surface;
        out["rows"] = rows;
        std::cout << out.dump() << "\n";
    } else if (format == "csv") {
        std::cout << "divisor,value\n";
        for (std::size_t i = 0; i < cells.size(); ++i)
            std::cout << cells[i].str() << ',' << values[i] << "\n";
    } else {
        for (std::size_t i = 0; i < cells.size(); ++i)
            std::cout << cells[i].str() << " " << values[i] << "\n";
    }
    return 0;
}

std::pair<int, int> parse_box(const std::string& text) {
    auto x = text.find('x');
    if (x == std::string::npos) throw std::domain_error("box: expected WxH");
    return {std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
}

int run_verify(const std::string& suite, const std::string& box_text, long nmax,
               const CacheConfig& cache) {
    twi::Engine eng;
    std::vector<twi::SuiteResult> results;
    auto want = [&suite](const char* name) { return suite == "all" || suite == name; };

    if (want("chc2")) results.push_back(twi::suite_golden_p2(eng));
    if (want("initial")) results.push_back(twi::suite_initial_values(eng));
    if (want("oracle")) results.push_back(twi::suite_oracle_values(eng));
    if (want("positivity")) {
        auto [w, h] = box_text.empty() ? std::pair{6, 6} : parse_box(box_text);
        results.push_back(twi::suite_positivity(eng, w, h));
    }
    if (want("monotonicity")) {
        auto [w, h] = box_text.empty() ? std::pair{5, 5} : parse_box(box_text);
        results.push_back(twi::suite_monotonicity(eng, w, h));
    }
    if (want("symmetry")) results.push_back(twi::suite_symmetry(eng));
    if (want("expid")) {
        auto [w, h] = box_text.empty() ? std::pair{3, 3} : parse_box(box_text);
        results.push_back(twi::suite_exp_identity(eng, w, h, nmax > 0 ? nmax : 8));
    }
    if (want("conservation")) results.push_back(twi::suite_conservation(eng));
    if (want("persistence")) {
        auto tmp = std::filesystem::temp_directory_path() / "twi-verify-cache.jsonl";
        results.push_back(twi::suite_persistence(tmp.string()));
    }
    if (cache.path) {
        twi::MemoCache loaded;
        std::ifstream is(*cache.path);
        twi::load_cache(loaded, is);
        results.push_back(twi::cache_crosscheck(loaded));
    }

    if (results.empty()) throw std::domain_error("verify: unknown suite '" + suite + "'");
    bool all_pass = true;
    for (const twi::SuiteResult& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": " << r.detail
                  << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 1;
}

int run_genfunc_check(const std::string& shape, const std::string& box_text, long nmax,
                      const std::string& format) {
    twi::Surface s;
    if (shape == "p2") s = twi::Surface::P2;
    else if (shape == "p1xp1") s = twi::Surface::P1xP1;
    else throw std::domain_error("genfunc-check: shape must be p2 or p1xp1");
    auto [w, h] = parse_box(box_text);
    twi::Engine eng;
    twi::ExpReport rep = twi::check_exp_identity(eng, s, {w, h, nmax});
    if (format == "json") {
        json mm = json::array();
        for (const twi::ExpMismatch& m : rep.mismatches) {
            json e;
            e["key"] = m.key.str();
            e["lhs"] = twi::rat_str(m.lhs);
            e["rhs"] = twi::rat_str(m.rhs);
            mm.push_back(e);
        }
        json out;
        out["checked"] = rep.checked;
        out["mismatches"] = mm;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "checked " << rep.checked << " keys, " << rep.mismatches.size()
                  << " mismatches\n";
        for (const twi::ExpMismatch& m : rep.mismatches)
            std::cout << "  " << m.key.str() << ": " << twi::rat_str(m.lhs) << " vs "
                      << twi::rat_str(m.rhs) << "\n";
    }
    return rep.mismatches.empty() ? 0 : 1;
}

int run_cache_roundtrip(const std::string& file, const twi::DivisorSpec& spec) {
    twi::Engine cold;
    twi::Int value = twi::welschinger(cold, spec);
    {
        std::ofstream os(file);
        twi::save_cache(cold.cache(), os);
    }
    twi::Engine warm;
    {
        std::ifstream is(file);
        twi::load_cache(warm.cache(), is);
    }
    twi::Int again = twi::welschinger(warm, spec);
    long hits = warm.cache().hits();
    if (again != value) {
        std::cerr << "error: cache value disagrees with recomputation\n";
        return 1;
    }
    if (hits == 0) {
        std::cerr << "error: warm query took no cache hits\n";
        return 1;
    }
    std::cout << "roundtrip ok: " << spec.str() << " = " << value << ", warm hits "
              << hits << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative tropical Welschinger invariants of toric Del Pezzo surfaces"};
    app.require_subcommand(1);

    std::string surface = "p2", spec_text, format = "text";
    std::string polygon_text, alpha_text = "0", beta_text = "0";
    std::string suite = "all", box_text, shape = "p2";
    std::string cache_path, cache_file;
    int k = 0, d = 0, d1 = 0, d2 = 0, d3 = 0;
    int max_d = 6, max = 3, threads = 1;
    long genus = 0, nmax = 0;
    bool irreducible = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format: text, json, csv");
        cmd->add_option("--cache", cache_path, "cache file (TWI_CACHE overrides)");
    };
    auto add_spec_flags = [&](CLI::App* cmd) {
        cmd->add_option("--surface", surface, "p2, p1xp1, or p2k");
        cmd->add_option("--spec", spec_text, "divisor spec text, e.g. p2:d=5");
        cmd->add_option("--k", k, "number of blown-up points (p2k)");
        cmd->add_option("--d", d, "degree");
        cmd->add_option("--d1", d1, "first multiplicity / bidegree component");
        cmd->add_option("--d2", d2, "second multiplicity / bidegree component");
        cmd->add_option("--d3", d3, "third multiplicity");
    };

    CLI::App* compute = app.add_subcommand("compute", "absolute Welschinger invariant");
    add_spec_flags(compute);
    add_common(compute);

    CLI::App* relative = app.add_subcommand("relative", "relative invariant of a key");
    relative->add_option("--polygon", polygon_text, "6-vector, canonical key, or vertex list")
        ->required();
    relative->add_option("--alpha", alpha_text, "fixed left tangency sequence");
    relative->add_option("--beta", beta_text, "free left tangency sequence");
    relative->add_option("--genus", genus, "genus (may be negative)");
    relative->add_flag("--irreducible", irreducible, "irreducible invariant");
    add_common(relative);

    CLI::App* table = app.add_subcommand("table", "batch tables over a surface family");
    table->add_option("--surface", surface, "p2, p1xp1, or p2k");
    table->add_option("--max-d", max_d, "degree bound (p2, p2k)");
    table->add_option("--max", max, "bidegree bound (p1xp1)");
    table->add_option("--threads", threads, "worker threads for independent cells");
    add_common(table);

    CLI::App* verify = app.add_subcommand("verify", "verification suites");
    verify->add_option("--suite", suite,
                       "all, chc2, initial, oracle, positivity, monotonicity, symmetry, "
                       "expid, conservation, persistence");
    verify->add_option("--box", box_text, "bounding box WxH for sweeps");
    verify->add_option("--nmax", nmax, "z-truncation for the exp identity");
    verify->add_option("--cache", cache_path, "cache file to cross-check");

    CLI::App* genfunc = app.add_subcommand("genfunc-check", "series exponential identity");
    genfunc->add_option("--shape", shape, "polygon shape family: p2 or p1xp1");
    genfunc->add_option("--box", box_text, "bounding box WxH")->required();
    genfunc->add_option("--nmax", nmax, "z-truncation")->required();
    genfunc->add_option("--format", format, "output format: text, json");

    CLI::App* cachecmd = app.add_subcommand("cache", "save/reload round trip");
    cachecmd->add_option("--file", cache_file, "cache file path")->required();
    add_spec_flags(cachecmd);

    CLI11_PARSE(app, argc, argv);

    try {
        CacheConfig cache;
        if (!cache_path.empty()) cache.path = cache_path;
        cache.resolve();

        if (compute->parsed()) {
            if (spec_text.empty() && d == 0 && surface == "p2")
                throw std::domain_error("compute: --d required for p2");
            return run_compute(spec_from_flags(surface, spec_text, k, d, d1, d2, d3),
                               format, cache);
        }
        if (relative->parsed())
            return run_relative(polygon_text, alpha_text, beta_text, genus, irreducible,
                                format, cache);
        if (table->parsed()) return run_table(surface, max_d, max, threads, format, cache);
        if (verify->parsed()) return run_verify(suite, box_text, nmax, cache);
        if (genfunc->parsed()) return run_genfunc_check(shape, box_text, nmax, format);
        if (cachecmd->parsed()) {
            twi::DivisorSpec spec = spec_text.empty() && d == 0
                                        ? twi::DivisorSpec{twi::Surface::P2, 5, 0, 0, 0}
                                        : spec_from_flags(surface, spec_text, k, d, d1, d2, d3);
            return run_cache_roundtrip(cache_file, spec);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
