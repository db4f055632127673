#include "htn/bench.h"

#include "htn/error.h"
#include "htn/families.h"
#include "htn/parser.h"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <thread>

namespace htn {

namespace fs = std::filesystem;
using json = nlohmann::json;

double agile_score(double seconds, double best_seconds) {
    const double t = std::max(seconds, kAgileClampSeconds);
    const double best = std::max(best_seconds, kAgileClampSeconds);
    return 1.0 / (1.0 + std::log10(t / best));
}

std::map<std::string, double>
agile_scores(const std::map<std::string, std::optional<double>> &times) {
    std::optional<double> best;
    for (const auto &[planner, t] : times)
        if (t && (!best || *t < *best))
            best = t;
    std::map<std::string, double> scores;
    for (const auto &[planner, t] : times)
        scores[planner] = t ? agile_score(*t, *best) : 0.0;
    return scores;
}

namespace {

std::string resolve(const std::string &base_dir, const std::string &path) {
    fs::path p(path);
    if (p.is_relative())
        p = fs::path(base_dir) / p;
    return p.lexically_normal().string();
}

std::string stem(const std::string &path) {
    return fs::path(path).stem().string();
}

} // namespace

Manifest parse_manifest(const std::string &json_text, const std::string &base_dir,
                        const std::string &data_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception &e) {
        throw Error(std::string("manifest: ") + e.what());
    }
    Manifest m;
    std::vector<std::string> missing;
    auto require = [&](const std::string &path) {
        if (!fs::exists(path))
            missing.push_back(path);
    };
    try {
        if (j.contains("planners")) {
            m.planners = j.at("planners").get<std::vector<std::string>>();
            for (const auto &p : m.planners)
                parse_planner(p);
        }
        if (j.contains("timeout"))
            m.timeout_seconds = j.at("timeout").get<double>();
        if (j.contains("planner_timeouts"))
            m.planner_timeouts = j.at("planner_timeouts").get<std::map<std::string, double>>();
        for (const auto &item : j.at("problems")) {
            if (item.contains("family")) {
                const std::string family = item.at("family").get<std::string>();
                std::vector<int> sizes;
                if (item.contains("sizes"))
                    sizes = item.at("sizes").get<std::vector<int>>();
                else
                    sizes.push_back(item.at("size").get<int>());
                const std::string domain = resolve(data_dir, family_domain_path(family));
                require(domain);
                for (int size : sizes) {
                    ManifestEntry e;
                    e.family = family;
                    e.size = size;
                    e.group = item.value("group", family);
                    e.name = family + "-" + std::to_string(size);
                    e.domain_path = domain;
                    m.entries.push_back(std::move(e));
                }
            } else {
                ManifestEntry e;
                e.domain_path = resolve(base_dir, item.at("domain").get<std::string>());
                e.problem_path = resolve(base_dir, item.at("problem").get<std::string>());
                require(e.domain_path);
                require(e.problem_path);
                e.name = item.value("name", stem(e.problem_path));
                e.group = item.value("group", stem(fs::path(e.domain_path).parent_path().string()));
                m.entries.push_back(std::move(e));
            }
        }
    } catch (const json::exception &e) {
        throw Error(std::string("manifest: ") + e.what());
    }
    if (!missing.empty()) {
        std::string msg = "manifest references missing files:";
        for (const auto &p : missing)
            msg += "\n  " + p;
        throw Error(msg);
    }
    return m;
}

Manifest load_manifest(const std::string &path, const std::string &data_dir) {
    return parse_manifest(read_file(path), fs::path(path).parent_path().string(), data_dir);
}

BenchResult run_bench(const Manifest &manifest, const RunOptions &base, int jobs) {
    BenchResult result;
    result.planners = manifest.planners;
    result.entries = manifest.entries;
    const std::size_t n = manifest.entries.size();
    result.runs.assign(n, std::vector<RunRecord>(manifest.planners.size()));
    result.scores.assign(n, std::vector<double>(manifest.planners.size(), 0.0));

    // Each worker owns whole entries: texts are loaded and parsed per run,
    // nothing is shared between threads.
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const ManifestEntry &e = manifest.entries[i];
            std::string domain_text;
            std::string problem_text;
            try {
                domain_text = read_file(e.domain_path);
                problem_text = e.family.empty() ? read_file(e.problem_path)
                                                : generate_family_problem(e.family, e.size);
            } catch (const Error &err) {
                for (std::size_t p = 0; p < manifest.planners.size(); ++p) {
                    RunRecord &r = result.runs[i][p];
                    r.problem = e.name;
                    r.planner = manifest.planners[p];
                    r.status = "input-error";
                    r.error = err.what();
                }
                continue;
            }
            for (std::size_t p = 0; p < manifest.planners.size(); ++p) {
                RunOptions options = base;
                options.planner = parse_planner(manifest.planners[p]);
                options.timeout_seconds = manifest.timeout_seconds;
                if (auto it = manifest.planner_timeouts.find(manifest.planners[p]);
                    it != manifest.planner_timeouts.end())
                    options.timeout_seconds = it->second;
                result.runs[i][p] = run_problem(domain_text, problem_text, options, e.name).record;
            }
        }
    };
    jobs = std::max(1, jobs);
    if (jobs == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int k = 0; k < jobs; ++k)
            pool.emplace_back(work);
    }

    for (std::size_t i = 0; i < n; ++i) {
        std::map<std::string, std::optional<double>> times;
        for (std::size_t p = 0; p < manifest.planners.size(); ++p) {
            const RunRecord &r = result.runs[i][p];
            times[manifest.planners[p]] = r.solved() ? std::optional(r.seconds()) : std::nullopt;
        }
        const auto scores = agile_scores(times);
        for (std::size_t p = 0; p < manifest.planners.size(); ++p)
            result.scores[i][p] = scores.at(manifest.planners[p]);
    }
    return result;
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

} // namespace

std::string format_bench(const BenchResult &result) {
    std::vector<std::string> groups;
    for (const auto &e : result.entries)
        if (std::find(groups.begin(), groups.end(), e.group) == groups.end())
            groups.push_back(e.group);

    std::ostringstream out;
    const std::size_t np = result.planners.size();
    for (const auto &group : groups) {
        out << "domain " << group << "\n";
        out << std::left << std::setw(16) << "problem";
        for (const auto &p : result.planners)
            out << std::right << std::setw(12) << p + " time" << std::setw(10) << p + " len"
                << std::setw(12) << p + " score";
        out << "\n";
        std::vector<double> totals(np, 0.0);
        for (std::size_t i = 0; i < result.entries.size(); ++i) {
            if (result.entries[i].group != group)
                continue;
            out << std::left << std::setw(16) << result.entries[i].name;
            for (std::size_t p = 0; p < np; ++p) {
                const RunRecord &r = result.runs[i][p];
                out << std::right << std::setw(12)
                    << (r.solved() ? fixed(r.seconds(), 3) : r.status) << std::setw(10)
                    << (r.solved() ? std::to_string(r.plan_length) : "-") << std::setw(12)
                    << fixed(result.scores[i][p], 3);
                totals[p] += result.scores[i][p];
            }
            out << "\n";
        }
        out << std::left << std::setw(16) << "total";
        for (std::size_t p = 0; p < np; ++p)
            out << std::right << std::setw(12) << "" << std::setw(10) << "" << std::setw(12)
                << fixed(totals[p], 3);
        out << "\n\n";
    }

    // Series: one line per planner and quantity, in manifest order.
    for (const auto &group : groups) {
        for (std::size_t p = 0; p < np; ++p) {
            std::ostringstream time_series;
            std::ostringstream length_series;
            for (std::size_t i = 0; i < result.entries.size(); ++i) {
                if (result.entries[i].group != group)
                    continue;
                const RunRecord &r = result.runs[i][p];
                time_series << " " << (r.solved() ? fixed(r.seconds(), 3) : "-");
                length_series << " " << (r.solved() ? std::to_string(r.plan_length) : "-");
            }
            out << "series " << group << " " << result.planners[p] << " time"
                << time_series.str() << "\n";
            out << "series " << group << " " << result.planners[p] << " length"
                << length_series.str() << "\n";
        }
    }
    return out.str();
}

} // namespace htn
