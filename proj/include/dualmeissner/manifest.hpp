#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualmeissner/digest.hpp"
#include "dualmeissner/errors.hpp"

namespace dm {

inline constexpr const char* kToolVersion = "1.0.0";

inline std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Records one run's provenance: the resolved parameters, the seed, and a
// digest per emitted file. Written atomically at run end; if the run aborts
// mid-flight the caller writes it with status "partial" instead so downstream
// tooling never mistakes debris for a finished run.
class RunManifest {
  public:
    RunManifest(std::string command, std::string out_dir)
        : command_(std::move(command)), out_dir_(std::move(out_dir)),
          started_(utc_timestamp()) {}

    void set_config(const std::map<std::string, std::string>& entries) { config_ = entries; }
    void set_seed(std::uint64_t seed) { seed_ = seed; has_seed_ = true; }

    // Paths are recorded relative to the manifest's directory.
    void add_output(const std::string& filename) { outputs_.push_back(filename); }

    std::string path() const {
        return (std::filesystem::path(out_dir_) / (command_ + ".manifest.json")).string();
    }

    void write(bool complete = true) const {
        nlohmann::json j;
        j["tool"] = "dualmeissner";
        j["version"] = kToolVersion;
        j["command"] = command_;
        j["status"] = complete ? "complete" : "partial";
        j["started_utc"] = started_;
        j["finished_utc"] = utc_timestamp();
        if (has_seed_) j["seed"] = seed_;
        j["config"] = config_;
        nlohmann::json files = nlohmann::json::array();
        for (const auto& name : outputs_) {
            nlohmann::json f;
            f["path"] = name;
            if (complete) {
                std::string full = (std::filesystem::path(out_dir_) / name).string();
                f["bytes"] = std::filesystem::file_size(full);
                f["fnv1a64"] = digest_hex(digest_file(full));
            }
            files.push_back(f);
        }
        j["outputs"] = files;

        const std::string target = path();
        const std::string tmp = target + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot open '" + tmp + "' for writing");
            out << j.dump(2) << "\n";
            out.flush();
            if (!out) throw IoError("write failure on '" + tmp + "'");
        }
        std::error_code ec;
        std::filesystem::rename(tmp, target, ec);
        if (ec) throw IoError("cannot move '" + tmp + "' to '" + target + "': " + ec.message());
    }

  private:
    std::string command_;
    std::string out_dir_;
    std::string started_;
    std::map<std::string, std::string> config_;
    std::uint64_t seed_ = 0;
    bool has_seed_ = false;
    std::vector<std::string> outputs_;
};

struct VerifyReport {
    int checked = 0;
    std::vector<std::string> mismatches;  // human-readable, one per problem
    bool ok() const { return mismatches.empty(); }
};

// Re-digests every file a manifest lists. A "partial" manifest fails
// verification by definition: the run that wrote it did not finish.
inline VerifyReport verify_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest '" + manifest_path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw IoError("manifest '" + manifest_path + "' is not valid JSON: " + e.what());
    }

    VerifyReport rep;
    if (j.value("status", "") != "complete")
        rep.mismatches.push_back("manifest status is '" + j.value("status", "<missing>") +
                                 "', expected 'complete'");
    const auto dir = std::filesystem::path(manifest_path).parent_path();
    for (const auto& f : j.value("outputs", nlohmann::json::array())) {
        std::string rel = f.value("path", "");
        std::string full = (dir / rel).string();
        ++rep.checked;
        if (!std::filesystem::exists(full)) {
            rep.mismatches.push_back(rel + ": missing");
            continue;
        }
        std::uint64_t want_bytes = f.value("bytes", std::uint64_t{0});
        std::uint64_t got_bytes = std::filesystem::file_size(full);
        if (got_bytes != want_bytes) {
            rep.mismatches.push_back(rel + ": size " + std::to_string(got_bytes) +
                                     ", manifest says " + std::to_string(want_bytes));
            continue;
        }
        std::string want = f.value("fnv1a64", "");
        std::string got = digest_hex(digest_file(full));
        if (got != want)
            rep.mismatches.push_back(rel + ": digest " + got + ", manifest says " + want);
    }
    return rep;
}

}  // namespace dm
