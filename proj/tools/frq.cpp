#include <CLI11.hpp>
#include <json.hpp>

#include <frq/oracle.hpp>
#include <frq/serialize.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#ifdef __unix__
#include <sys/utsname.h>
#endif

using json = nlohmann::json;
using frq::symbol_t;
using frq::tau;
using frq::u32;
using frq::u64;

namespace {

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_all_bytes(const std::string& path) {
    if (path == "-") {
        std::vector<std::uint8_t> buf(std::istreambuf_iterator<char>(std::cin),
                                      std::istreambuf_iterator<char>{});
        return buf;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open input file: " + path);
    std::vector<std::uint8_t> buf(std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>{});
    return buf;
}

struct loaded_data {
    std::vector<symbol_t> syms;
    u64 sigma;
};

loaded_data read_input(const std::string& path, const std::string& format,
                       u64 sigma_opt) {
    loaded_data d;
    if (format == "bytes") {
        auto raw = read_all_bytes(path);
        d.syms.reserve(raw.size());
        for (std::uint8_t b : raw) d.syms.push_back(symbol_t(b) + 1);
        d.sigma = sigma_opt ? sigma_opt : 256;
    } else if (format == "ints") {
        auto raw = read_all_bytes(path);
        std::istringstream in(std::string(raw.begin(), raw.end()));
        u64 v, mx = 0;
        while (in >> v) {
            if (v == 0) throw usage_error("ints format: symbols start at 1");
            d.syms.push_back(symbol_t(v));
            mx = std::max(mx, v);
        }
        if (!in.eof())
            throw usage_error("ints format: non-numeric token in input");
        d.sigma = sigma_opt ? sigma_opt : mx;
    } else {
        throw usage_error("unknown format: " + format);
    }
    if (d.syms.empty()) throw usage_error("input holds no symbols");
    for (symbol_t c : d.syms)
        if (c > d.sigma)
            throw usage_error("symbol " + std::to_string(c) +
                              " exceeds sigma " + std::to_string(d.sigma));
    return d;
}

frq::build_options parse_structures(const std::string& csv, tau fixed_tau,
                                    u64 slack, u64 minority_block,
                                    u64 counts_min) {
    frq::build_options opt;
    opt.with_fixed = opt.with_var = opt.with_block = opt.with_minority =
        opt.with_counts = false;
    opt.fixed_tau = fixed_tau;
    opt.slack = slack;
    opt.minority_block = minority_block;
    opt.counts_min = counts_min;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "fixed") opt.with_fixed = true;
        else if (item == "var") opt.with_var = true;
        else if (item == "block") opt.with_block = true;
        else if (item == "minority") opt.with_minority = true;
        else if (item == "counts") opt.with_counts = true;
        else if (!item.empty())
            throw usage_error("unknown structure: " + item);
    }
    if (!opt.with_fixed && !opt.with_var && !opt.with_block &&
        !opt.with_minority && !opt.with_counts)
        throw usage_error("no structures selected");
    return opt;
}

json section_sizes(const std::vector<std::uint8_t>& bytes) {
    frq::byte_reader r(bytes.data(), bytes.size());
    r.tag();
    r.u32le();
    u32 nsections = r.u32le();
    json out = json::object();
    for (u32 s = 0; s < nsections; ++s) {
        auto t = r.tag();
        r.u64le();
        u64 len = r.u64le();
        r.u32le();
        out[std::string(t.data(), 4)] = len;
    }
    return out;
}

frq::index_file load_index(const std::string& path) {
    auto bytes = read_all_bytes(path);
    return frq::parse_index_file(bytes.data(), bytes.size());
}

std::pair<u64, u64> parse_range(const std::string& s, u64 n) {
    auto colon = s.find(':');
    if (colon == std::string::npos)
        throw usage_error("range must look like i:j");
    u64 i, j;
    try {
        i = std::stoull(s.substr(0, colon));
        j = std::stoull(s.substr(colon + 1));
    } catch (const std::exception&) {
        throw usage_error("range must hold two integers: " + s);
    }
    if (i < 1 || i > j || j > n)
        throw usage_error("range " + s + " outside 1:" + std::to_string(n));
    return {i, j};
}

json stats_json(const frq::query_stats& st) {
    return {{"dict_probes", st.dict_probes},
            {"binsearch_steps", st.binsearch_steps},
            {"cells_scanned", st.cells_scanned},
            {"rmq_queries", st.rmq_queries},
            {"candidates_checked", st.candidates_checked},
            {"checks_aborted", st.checks_aborted}};
}

json items_json(const std::vector<frq::majority_item>& items) {
    json arr = json::array();
    for (const auto& it : items)
        arr.push_back({{"sym", it.sym}, {"pos", it.pos}, {"count", it.count}});
    return arr;
}

json run_one(const frq::index_file& f, const std::string& op, u64 i, u64 j,
             tau t, bool want_stats) {
    frq::query_stats st;
    json out = {{"op", op}, {"i", i}, {"j", j}};
    if (op == "var" || op == "block" || op == "sensitive")
        out["tau"] = t.str();

    if (op == "var") {
        if (!f.var) throw usage_error("index lacks the var structure");
        out["items"] = items_json(f.var->query(i, j, t, &st));
    } else if (op == "fixed") {
        if (!f.fixed) throw usage_error("index lacks the fixed structure");
        out["tau"] = f.fixed->threshold().str();
        out["items"] = items_json(f.fixed->query(i, j, &st));
    } else if (op == "block") {
        if (!f.block) throw usage_error("index lacks the block structure");
        out["items"] = items_json(f.block->query(i, j, t, &st));
    } else if (op == "sensitive") {
        if (!f.var || !f.counts)
            throw usage_error("sensitive needs the var and counts structures");
        out["items"] =
            items_json(frq::query_majority_sensitive(*f.var, *f.counts, i, j,
                                                     t, &st));
    } else if (op == "minority") {
        out["tau"] = t.str();
        frq::minority_answer m;
        if (f.minority_links) {
            m = frq::query_minority(*f.seq, *f.minority_links, i, j, t, &st);
        } else if (f.minority_blocks) {
            frq::mark_set marks(f.seq->sigma());
            m = frq::query_minority_sparse(*f.seq, *f.minority_blocks, marks,
                                           i, j, t, &st);
        } else {
            throw usage_error("index lacks the minority structure");
        }
        out["found"] = m.found;
        if (m.found)
            out["item"] = {{"sym", m.sym}, {"pos", m.pos}, {"count", m.count}};
    } else if (op == "mode") {
        if (!f.var) throw usage_error("mode needs the var structure");
        auto md = frq::query_mode_frequent(*f.var, i, j, &st);
        out["item"] = {{"sym", md.sym}, {"pos", md.pos}, {"count", md.count}};
    } else {
        throw usage_error("unknown op: " + op);
    }
    if (want_stats) out["stats"] = stats_json(st);
    return out;
}

int do_build(const std::string& input, const std::string& format, u64 sigma,
             const std::string& structures, const std::string& tau_s, u64 slack,
             u64 minority_block, u64 counts_min, const std::string& output) {
    auto t0 = std::chrono::steady_clock::now();
    auto d = read_input(input, format, sigma);
    auto opt = parse_structures(structures, tau::parse(tau_s), slack,
                                minority_block, counts_min);
    auto f = frq::build_index_file(d.syms, d.sigma, opt);
    auto bytes = frq::serialize_index_file(f);
    {
        std::ofstream outp(output, std::ios::binary);
        if (!outp) throw usage_error("cannot open output file: " + output);
        outp.write(reinterpret_cast<const char*>(bytes.data()),
                   std::streamsize(bytes.size()));
        if (!outp) throw std::runtime_error("write failed: " + output);
    }
    auto ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    json out = {{"n", d.syms.size()},
                {"sigma", d.sigma},
                {"bytes", bytes.size()},
                {"sections", section_sizes(bytes)},
                {"build_ms", ms}};
    std::cout << out.dump() << "\n";
    return 0;
}

int do_query(const std::string& index_path, const std::string& op,
             const std::string& range_s, const std::string& tau_s,
             const std::string& batch, bool want_stats) {
    auto f = load_index(index_path);
    u64 n = f.seq->size();
    tau t = tau::parse(tau_s);
    if (!range_s.empty()) {
        auto [i, j] = parse_range(range_s, n);
        std::cout << run_one(f, op, i, j, t, want_stats).dump() << "\n";
        return 0;
    }
    if (batch.empty())
        throw usage_error("give --range i:j or --batch FILE|-");
    std::ifstream file;
    std::istream* in = &std::cin;
    if (batch != "-") {
        file.open(batch);
        if (!file) throw usage_error("cannot open batch file: " + batch);
        in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        u64 i, j;
        std::string tok;
        if (!(ls >> i >> j)) throw usage_error("batch line needs i j: " + line);
        tau qt = t;
        if (ls >> tok) qt = tau::parse(tok);
        if (i < 1 || i > j || j > n)
            throw usage_error("batch range outside the sequence: " + line);
        std::cout << run_one(f, op, i, j, qt, want_stats).dump() << "\n";
    }
    return 0;
}

int do_verify(const std::string& index_path, u64 queries, u64 seed) {
    auto f = load_index(index_path);
    auto data = f.seq->decode();
    u64 n = f.seq->size(), sigma = f.seq->sigma();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<u64> pos(1, n);

    std::vector<tau> taus = {tau(1, 1), tau(1, 2), tau(2, 5), tau(1, 7)};
    taus.push_back(tau(1, std::max<u64>(2, sigma)));
    taus.push_back(tau(1, std::min<u64>(509, 2 * sigma + 1)));

    u64 checks = 0, mismatches = 0;
    auto item_ok = [&](const frq::majority_item& it, u64 i, u64 j,
                       const std::vector<u64>& cnt) {
        u64 first = 0;
        for (u64 k = i; k <= j && !first; ++k)
            if (data[k - 1] == it.sym) first = k;
        return it.pos == first && it.count == cnt[it.sym];
    };
    auto same_set = [&](const std::vector<frq::majority_item>& got, u64 i,
                        u64 j, tau t) {
        auto want = frq::oracle::majorities(data, sigma, i, j, t);
        if (got.size() != want.size()) return false;
        auto cnt = frq::oracle::counts_in_range(data, sigma, i, j);
        auto sorted = got;
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.sym < b.sym; });
        for (std::size_t q = 0; q < want.size(); ++q)
            if (sorted[q].sym != want[q].sym ||
                !item_ok(sorted[q], i, j, cnt))
                return false;
        return true;
    };

    frq::mark_set marks(sigma);
    for (u64 q = 0; q < queries; ++q) {
        u64 a = pos(rng), b = pos(rng);
        u64 i = std::min(a, b), j = std::max(a, b);
        tau t = taus[q % taus.size()];
        u64 need = t.threshold(j - i + 1);

        if (f.var) {
            ++checks;
            if (!same_set(f.var->query(i, j, t), i, j, t)) ++mismatches;
            ++checks;
            auto md = frq::query_mode_frequent(*f.var, i, j);
            auto want = frq::oracle::mode(data, sigma, i, j);
            if (md.sym != want.sym || md.count != want.count) ++mismatches;
        }
        if (f.fixed) {
            ++checks;
            if (!same_set(f.fixed->query(i, j), i, j, f.fixed->threshold()))
                ++mismatches;
        }
        if (f.block) {
            ++checks;
            if (!same_set(f.block->query(i, j, t), i, j, t)) ++mismatches;
        }
        if (f.var && f.counts) {
            ++checks;
            if (!same_set(frq::query_majority_sensitive(*f.var, *f.counts, i,
                                                        j, t),
                          i, j, t))
                ++mismatches;
        }
        if (f.minority_links || f.minority_blocks) {
            ++checks;
            frq::minority_answer m;
            if (f.minority_links)
                m = frq::query_minority(*f.seq, *f.minority_links, i, j, t);
            else
                m = frq::query_minority_sparse(*f.seq, *f.minority_blocks,
                                               marks, i, j, t);
            auto cnt = frq::oracle::counts_in_range(data, sigma, i, j);
            bool any = false;
            for (u64 c = 1; c <= sigma; ++c)
                any = any || (cnt[c] > 0 && cnt[c] < need);
            if (m.found != any) {
                ++mismatches;
            } else if (m.found) {
                u64 first = 0;
                for (u64 k = i; k <= j && !first; ++k)
                    if (data[k - 1] == m.sym) first = k;
                if (cnt[m.sym] == 0 || cnt[m.sym] >= need ||
                    m.count != cnt[m.sym] || m.pos != first)
                    ++mismatches;
            }
        }
    }
    json out = {{"queries", queries},
                {"checks", checks},
                {"mismatches", mismatches},
                {"ok", mismatches == 0}};
    std::cout << out.dump() << "\n";
    return mismatches == 0 ? 0 : 1;
}

double percentile(std::vector<double> v, double p) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    double idx = p / 100.0 * double(v.size() - 1);
    std::size_t lo = std::size_t(idx);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = idx - double(lo);
    return v[lo] * (1 - frac) + v[hi] * frac;
}

json machine_json(u64 threads) {
    json m = {{"hardware_threads", std::thread::hardware_concurrency()},
              {"threads", threads},
              {"pointer_bits", sizeof(void*) * 8}};
#ifdef __VERSION__
    m["compiler"] = __VERSION__;
#endif
#ifdef __unix__
    utsname u{};
    if (uname(&u) == 0)
        m["os"] = std::string(u.sysname) + " " + u.release + " " + u.machine;
#endif
    return m;
}

int do_bench(const std::string& input, const std::string& format, u64 sigma,
             const std::string& index_path, const std::string& op,
             const std::string& taus_csv, u64 queries, u64 seed, u64 threads,
             const std::string& structures, const std::string& tau_s,
             u64 slack, u64 minority_block, u64 counts_min) {
    if (threads == 0) throw usage_error("threads must be positive");
    frq::index_file f;
    double build_ms = 0;
    if (!index_path.empty()) {
        f = load_index(index_path);
    } else if (!input.empty()) {
        auto t0 = std::chrono::steady_clock::now();
        auto d = read_input(input, format, sigma);
        auto opt = parse_structures(structures, tau::parse(tau_s), slack,
                                    minority_block, counts_min);
        f = frq::build_index_file(d.syms, d.sigma, opt);
        build_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    } else {
        throw usage_error("bench needs --input or --index");
    }
    u64 n = f.seq->size();

    std::vector<tau> taus;
    {
        std::stringstream ss(taus_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) taus.push_back(tau::parse(item));
    }
    if (taus.empty()) throw usage_error("no thresholds given");

    json results = json::array();
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        tau t = taus[ti];
        std::mt19937_64 rng(seed + ti);
        std::uniform_int_distribution<u64> pos(1, n);
        std::vector<std::pair<u64, u64>> ranges(queries);
        for (auto& r : ranges) {
            u64 a = pos(rng), b = pos(rng);
            r = {std::min(a, b), std::max(a, b)};
        }

        std::vector<double> lat(queries);
        std::vector<frq::query_stats> tstats(threads);
        std::vector<u64> titems(threads, 0);
        auto worker = [&](u64 w) {
            frq::query_stats& st = tstats[w];
            for (u64 q = w; q < queries; q += threads) {
                auto [i, j] = ranges[q];
                auto q0 = std::chrono::steady_clock::now();
                std::size_t got = 0;
                if (op == "var") {
                    got = f.var->query(i, j, t, &st).size();
                } else if (op == "fixed") {
                    got = f.fixed->query(i, j, &st).size();
                } else if (op == "block") {
                    got = f.block->query(i, j, t, &st).size();
                } else if (op == "sensitive") {
                    got = frq::query_majority_sensitive(*f.var, *f.counts, i,
                                                        j, t, &st)
                              .size();
                } else if (op == "mode") {
                    frq::query_mode_frequent(*f.var, i, j, &st);
                    got = 1;
                } else if (op == "minority") {
                    frq::mark_set marks(f.seq->sigma());
                    if (f.minority_links)
                        got = frq::query_minority(*f.seq, *f.minority_links, i,
                                                  j, t, &st)
                                  .found;
                    else
                        got = frq::query_minority_sparse(*f.seq,
                                                         *f.minority_blocks,
                                                         marks, i, j, t, &st)
                                  .found;
                }
                lat[q] = std::chrono::duration<double, std::micro>(
                             std::chrono::steady_clock::now() - q0)
                             .count();
                titems[w] += got;
            }
        };
        if (op == "var" || op == "mode" || op == "sensitive") {
            if (!f.var) throw usage_error("index lacks the var structure");
        }
        if (op == "sensitive" && !f.counts)
            throw usage_error("index lacks the counts structure");
        if (op == "fixed" && !f.fixed)
            throw usage_error("index lacks the fixed structure");
        if (op == "block" && !f.block)
            throw usage_error("index lacks the block structure");
        if (op == "minority" && !f.minority_links && !f.minority_blocks)
            throw usage_error("index lacks the minority structure");
        if (op != "var" && op != "fixed" && op != "block" &&
            op != "sensitive" && op != "mode" && op != "minority")
            throw usage_error("unknown op: " + op);

        std::vector<std::thread> pool;
        for (u64 w = 1; w < threads; ++w) pool.emplace_back(worker, w);
        worker(0);
        for (auto& th : pool) th.join();

        frq::query_stats sum;
        u64 items = 0;
        for (const auto& st : tstats) {
            sum.dict_probes += st.dict_probes;
            sum.binsearch_steps += st.binsearch_steps;
            sum.cells_scanned += st.cells_scanned;
            sum.rmq_queries += st.rmq_queries;
            sum.candidates_checked += st.candidates_checked;
            sum.checks_aborted += st.checks_aborted;
        }
        for (u64 w = 0; w < threads; ++w) items += titems[w];

        double mean = 0;
        for (double x : lat) mean += x;
        mean /= double(queries);
        results.push_back(
            {{"tau", t.str()},
             {"queries", queries},
             {"p50_us", percentile(lat, 50)},
             {"p95_us", percentile(lat, 95)},
             {"p99_us", percentile(lat, 99)},
             {"mean_us", mean},
             {"items_total", items},
             {"candidates_mean",
              double(sum.candidates_checked) / double(queries)},
             {"stats_total", stats_json(sum)}});
    }

    auto bytes = frq::serialize_index_file(f);
    json out = {{"op", op},
                {"n", n},
                {"sigma", f.seq->sigma()},
                {"build_ms", build_ms},
                {"index_bytes", bytes.size()},
                {"sections", section_sizes(bytes)},
                {"machine", machine_json(threads)},
                {"results", results}};
    std::cout << out.dump() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"frequency-sensitive range queries over integer sequences"};
    app.require_subcommand(1);

    std::string input, format = "bytes", output, index_path, op = "var";
    std::string structures = "var,minority", tau_s = "1/2", range_s, batch;
    std::string taus_csv = "1/2,1/256";
    u64 sigma = 0, slack = 4, minority_block = 0, counts_min = 1;
    u64 queries = 200, seed = 42, threads = 1;
    bool want_stats = false;

    auto* build = app.add_subcommand("build", "build an index file");
    build->add_option("--input", input, "raw data, - for stdin")->required();
    build->add_option("--format", format, "bytes|ints");
    build->add_option("--sigma", sigma, "alphabet size (default: infer)");
    build->add_option("--structures", structures,
                      "csv of fixed,var,block,minority,counts");
    build->add_option("--tau", tau_s, "threshold for the fixed structure");
    build->add_option("--slack", slack, "block structure slack");
    build->add_option("--minority-block", minority_block,
                      "minority listing block length, 0 = exact");
    build->add_option("--counts-min", counts_min,
                      "minimum global count for per-symbol point sets");
    build->add_option("--output", output, "index file to write")->required();

    auto* query = app.add_subcommand("query", "run queries against an index");
    query->add_option("--index", index_path, "index file")->required();
    query->add_option("--op", op,
                      "var|fixed|block|sensitive|minority|mode");
    query->add_option("--range", range_s, "1-based inclusive range i:j");
    query->add_option("--tau", tau_s, "threshold, p/q or decimal");
    query->add_option("--batch", batch,
                      "file of lines 'i j [tau]', - for stdin");
    query->add_flag("--stats", want_stats, "include work counters");

    auto* verify = app.add_subcommand(
        "verify", "compare every stored structure against brute force");
    verify->add_option("--index", index_path, "index file")->required();
    verify->add_option("--queries", queries, "random ranges to test");
    verify->add_option("--seed", seed, "rng seed");

    auto* bench = app.add_subcommand("bench", "measure query latency");
    bench->add_option("--input", input, "raw data to build from");
    bench->add_option("--format", format, "bytes|ints");
    bench->add_option("--sigma", sigma, "alphabet size (default: infer)");
    bench->add_option("--index", index_path, "prebuilt index file");
    bench->add_option("--op", op, "var|fixed|block|sensitive|minority|mode");
    bench->add_option("--taus", taus_csv, "csv of thresholds");
    bench->add_option("--queries", queries, "queries per threshold");
    bench->add_option("--seed", seed, "rng seed");
    bench->add_option("--threads", threads, "worker threads");
    bench->add_option("--structures", structures,
                      "csv of structures when building");
    bench->add_option("--tau", tau_s, "threshold for the fixed structure");
    bench->add_option("--slack", slack, "block structure slack");
    bench->add_option("--minority-block", minority_block,
                      "minority listing block length, 0 = exact");
    bench->add_option("--counts-min", counts_min,
                      "minimum global count for per-symbol point sets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed())
            return do_build(input, format, sigma, structures, tau_s, slack,
                            minority_block, counts_min, output);
        if (query->parsed())
            return do_query(index_path, op, range_s, tau_s, batch, want_stats);
        if (verify->parsed()) return do_verify(index_path, queries, seed);
        if (bench->parsed())
            return do_bench(input, format, sigma, index_path, op, taus_csv,
                            queries, seed, threads, structures, tau_s, slack,
                            minority_block, counts_min);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
