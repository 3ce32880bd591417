#pragma once

#include <string>
#include <vector>

#include "sopma/config.hpp"
#include "sopma/errors.hpp"

namespace sopma::pipeline {

// FNV-1a 64-bit content hash, hex-encoded; used for the artifact manifest.
std::string file_hash(const std::string& path);

struct StageError : Error {
    StageError(const std::string& stage, const std::string& msg)
        : Error("[" + stage + "] " + msg), stage_name(stage) {}
    std::string stage_name;
};

// Each stage reads the previous stage's exported artifacts from the output
// directory and writes its own. Composition of the stages equals run().
void stage_survey_fit(const config::RunConfig& cfg);
void stage_ingest(const config::RunConfig& cfg);
void stage_simulate(const config::RunConfig& cfg);  // zero-policy baseline
void stage_sweep(const config::RunConfig& cfg);
void stage_couple(const config::RunConfig& cfg);
void stage_report(const config::RunConfig& cfg);

// Runs every stage and writes a manifest. Throws StageError on failure
// after writing a manifest that marks the run incomplete.
void run(const config::RunConfig& cfg);

void write_manifest(const std::string& out_dir, bool complete,
                    const std::string& error = "");

}  // namespace sopma::pipeline
