#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "dlo/serialize.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes are a stable contract: 0 ok, 1 partial failure, 2 I/O,
// 3 config/manifest.
constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kIoError = 2;
constexpr int kConfigError = 3;

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw dlo::FormatError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dlo::FormatError("cannot write " + path);
    out << text;
    if (!out) throw dlo::FormatError("short write to " + path);
}

// --config flag, then DLO_CONFIG, then built-in defaults.
dlo::PipelineConfig load_config(const std::string& config_path, int& status) {
    status = kOk;
    std::string path = config_path;
    if (path.empty()) {
        const char* env = std::getenv("DLO_CONFIG");
        if (env && *env) path = env;
    }
    if (path.empty()) return {};
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = kIoError;
        return {};
    }
    try {
        return dlo::config_from_json(text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = kConfigError;
        return {};
    }
}

struct DetectOptions {
    std::string input;
    std::string config_path;
    std::string out_path;
    std::string overlay_path;
    bool no_timings = false;
};

int run_detect(const DetectOptions& opt) {
    int status = kOk;
    dlo::PipelineConfig config = load_config(opt.config_path, status);
    if (status != kOk) return status;

    dlo::Image image;
    try {
        image = dlo::load_ppm_file(opt.input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }

    dlo::DetectionResult result = dlo::detect(image, config);
    try {
        write_text_file(opt.out_path, dlo::detection_to_json(result, config.fit.segment_length,
                                                             !opt.no_timings));
        if (!opt.overlay_path.empty())
            dlo::save_ppm_file(dlo::render_overlay(image, result, config), opt.overlay_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}

struct BatchOptions {
    std::string frames_dir;
    std::string config_path;
    std::string out_dir;
    int parallel = 1;
    bool no_timings = false;
};

int run_batch(const BatchOptions& opt) {
    int status = kOk;
    dlo::PipelineConfig config = load_config(opt.config_path, status);
    if (status != kOk) return status;

    std::vector<fs::path> frames;
    try {
        if (!fs::is_directory(opt.frames_dir)) {
            std::cerr << "error: not a directory: " << opt.frames_dir << "\n";
            return kIoError;
        }
        for (const auto& entry : fs::directory_iterator(opt.frames_dir)) {
            std::string name = entry.path().filename().string();
            if (name.starts_with("frame_") && name.ends_with(".ppm"))
                frames.push_back(entry.path());
        }
        std::sort(frames.begin(), frames.end());
        fs::create_directories(opt.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }

    struct Outcome {
        bool failed = false;
        std::string error;
        double total_ms = 0.0;
    };
    std::vector<Outcome> outcomes(frames.size());

    int workers = std::max(1, opt.parallel);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= frames.size()) break;
            try {
                dlo::Image image = dlo::load_ppm_file(frames[i].string());
                dlo::DetectionResult result = dlo::detect(image, config);
                std::string stem = frames[i].stem().string();
                write_text_file((fs::path(opt.out_dir) / (stem + ".json")).string(),
                                dlo::detection_to_json(result, config.fit.segment_length,
                                                       !opt.no_timings));
                outcomes[i].total_ms = result.timings.total_ms;
            } catch (const std::exception& e) {
                outcomes[i].failed = true;
                outcomes[i].error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    int failed = 0;
    double time_sum = 0.0;
    for (size_t i = 0; i < frames.size(); ++i) {
        if (outcomes[i].failed) {
            ++failed;
            std::cerr << "frame " << frames[i].filename().string() << " failed: "
                      << outcomes[i].error << "\n";
        } else {
            time_sum += outcomes[i].total_ms;
        }
    }
    int done = static_cast<int>(frames.size()) - failed;
    std::string summary = "{\n  \"version\": 1,\n  \"frames\": " + std::to_string(frames.size()) +
                          ",\n  \"failed\": " + std::to_string(failed) +
                          ",\n  \"mean_time_ms\": " + std::to_string(done > 0 ? time_sum / done : 0.0) +
                          "\n}\n";
    try {
        write_text_file((fs::path(opt.out_dir) / "summary.json").string(), summary);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return failed > 0 ? kPartial : kOk;
}

struct SynthOptions {
    std::string manifest_path;
    std::string out_dir;
    int64_t seed = -1;
};

int run_synth(const SynthOptions& opt) {
    std::string text;
    try {
        text = read_text_file(opt.manifest_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    std::vector<dlo::SceneParams> scenes;
    try {
        scenes = dlo::manifest_from_json(text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    if (opt.seed >= 0)
        for (size_t i = 0; i < scenes.size(); ++i)
            scenes[i].seed = static_cast<uint64_t>(opt.seed) + i;

    try {
        fs::create_directories(opt.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }

    int failed = 0;
    for (size_t i = 0; i < scenes.size(); ++i) {
        char frame_name[32], truth_name[32];
        std::snprintf(frame_name, sizeof(frame_name), "frame_%06zu.ppm", i + 1);
        std::snprintf(truth_name, sizeof(truth_name), "truth_%06zu.json", i + 1);
        try {
            auto [image, truth] = dlo::generate_scene(scenes[i]);
            dlo::save_ppm_file(image, (fs::path(opt.out_dir) / frame_name).string());
            write_text_file((fs::path(opt.out_dir) / truth_name).string(),
                            dlo::truth_to_json(truth, scenes[i]));
        } catch (const std::exception& e) {
            ++failed;
            std::cerr << "scene " << i + 1 << " failed: " << e.what() << "\n";
        }
    }
    return failed > 0 ? kPartial : kOk;
}

struct BenchOptions {
    std::string manifest_path;
    std::string config_path;
    std::string out_path;
    int64_t seed = -1;
};

int run_bench(const BenchOptions& opt) {
    int status = kOk;
    dlo::PipelineConfig config = load_config(opt.config_path, status);
    if (status != kOk) return status;

    std::string text;
    try {
        text = read_text_file(opt.manifest_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    std::vector<dlo::SceneParams> scenes;
    try {
        scenes = dlo::manifest_from_json(text);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    if (opt.seed >= 0)
        for (size_t i = 0; i < scenes.size(); ++i)
            scenes[i].seed = static_cast<uint64_t>(opt.seed) + i;

    dlo::BenchmarkReport report = dlo::run_benchmark(scenes, config, dlo::ScoreConfig{});
    std::string json = dlo::report_to_json(report, config);
    std::cout << json;
    if (!opt.out_path.empty()) {
        try {
            write_text_file(opt.out_path, json);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kIoError;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deformable linear object detection: single images, frame batches, "
                 "synthetic scenes, and benchmarks"};
    app.require_subcommand(1);

    DetectOptions detect_opt;
    CLI::App* detect = app.add_subcommand("detect", "Detect the DLO in one PPM frame");
    detect->add_option("input", detect_opt.input, "Input frame (binary PPM)")->required();
    detect->add_option("--config", detect_opt.config_path, "Pipeline config JSON");
    detect->add_option("--out", detect_opt.out_path, "Detection document output path")->required();
    detect->add_option("--overlay", detect_opt.overlay_path, "Optional overlay PPM path");
    detect->add_flag("--no-timings", detect_opt.no_timings,
                     "Omit timing fields for byte-stable output");

    BatchOptions batch_opt;
    CLI::App* batch = app.add_subcommand("batch", "Detect over a directory of frames");
    batch->add_option("frames_dir", batch_opt.frames_dir, "Directory of frame_*.ppm")->required();
    batch->add_option("out_dir", batch_opt.out_dir, "Output directory")->required();
    batch->add_option("--config", batch_opt.config_path, "Pipeline config JSON");
    batch->add_option("--parallel", batch_opt.parallel, "Worker thread count")
        ->check(CLI::PositiveNumber);
    batch->add_flag("--no-timings", batch_opt.no_timings,
                    "Omit timing fields for byte-stable output");

    SynthOptions synth_opt;
    CLI::App* synth = app.add_subcommand("synth", "Generate synthetic scenes from a manifest");
    synth->add_option("manifest", synth_opt.manifest_path, "Corpus manifest JSON")->required();
    synth->add_option("out_dir", synth_opt.out_dir, "Output directory")->required();
    synth->add_option("--seed", synth_opt.seed, "Override scene seeds with S, S+1, ...");

    BenchOptions bench_opt;
    CLI::App* bench = app.add_subcommand("bench", "Run the synthetic benchmark");
    bench->add_option("manifest", bench_opt.manifest_path, "Corpus manifest JSON")->required();
    bench->add_option("--config", bench_opt.config_path, "Pipeline config JSON");
    bench->add_option("--out", bench_opt.out_path, "Also write the report here");
    bench->add_option("--seed", bench_opt.seed, "Override scene seeds with S, S+1, ...");

    CLI11_PARSE(app, argc, argv);

    if (detect->parsed()) return run_detect(detect_opt);
    if (batch->parsed()) return run_batch(batch_opt);
    if (synth->parsed()) return run_synth(synth_opt);
    if (bench->parsed()) return run_bench(bench_opt);
    return kOk;
}
