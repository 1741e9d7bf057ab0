// SPDX-License-Identifier: Apache-2.0
//
// slra — stage-wise low-rank adaptation pipeline for compound expression
// recognition at desk scale: synthetic data, two-stage LoRA fine-tuning,
// context prompts, structured-response parsing, and accuracy reports.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "slra/categories.hpp"
#include "slra/checkpoint.hpp"
#include "slra/dataset.hpp"
#include "slra/errors.hpp"
#include "slra/eval.hpp"
#include "slra/io.hpp"
#include "slra/model.hpp"
#include "slra/parser.hpp"
#include "slra/prompt.hpp"
#include "slra/rng.hpp"
#include "slra/train.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitState = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SLRA_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw slra::DataError("SLRA_SEED is not a valid unsigned integer");
        }
    }
    return 42;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        slra::atomic_write_file(out_path, text);
    }
}

struct SynthArgs {
    std::uint64_t seed = 0;
    double sigma = 0.05;
    std::size_t per_class = 100;
    std::size_t dim = 16;
    std::string out_dir;
};

int run_synth(const SynthArgs& args) {
    slra::SynthSpec spec = slra::SynthSpec::defaults(slra::mix_seed(args.seed, "data"));
    spec.noise_sigma = args.sigma;
    spec.examples_per_class = args.per_class;
    spec.d_in = args.dim;
    auto [basic, compound] = slra::generate(spec);

    std::filesystem::path dir(args.out_dir);
    std::string basic_path = (dir / "basic.jsonl").string();
    std::string compound_path = (dir / "compound.jsonl").string();
    slra::write_manifest_file(basic, basic_path);
    slra::write_manifest_file(compound, compound_path);
    std::cerr << "wrote " << basic_path << " (" << basic.records.size() << " records)\n";
    std::cerr << "wrote " << compound_path << " (" << compound.records.size()
              << " records)\n";
    return kExitOk;
}

struct TrainArgs {
    int stage = 1;
    std::string manifest_path;
    std::string out_path;
    std::string from_checkpoint;
    std::uint64_t seed = 0;
    bool allow_singlestage = false;
    // -1 sentinels: fall back to the stage defaults.
    long long rank = -1;
    double learning_rate = -1.0;
    long long epochs = -1;
    long long batch_size = -1;
};

slra::StageConfig stage_config(const TrainArgs& args,
                               const std::vector<std::string>& labels) {
    slra::StageConfig config =
        args.stage == 1 ? slra::stage1_defaults(labels, 0) : slra::stage2_defaults(labels, 0);
    config.seed = slra::mix_seed(args.seed, "stage", static_cast<std::uint64_t>(args.stage));
    if (args.rank >= 0) config.rank = static_cast<std::size_t>(args.rank);
    if (args.learning_rate >= 0.0) config.learning_rate = args.learning_rate;
    if (args.epochs >= 0) config.epochs = static_cast<std::size_t>(args.epochs);
    if (args.batch_size >= 0) config.batch_size = static_cast<std::size_t>(args.batch_size);
    return config;
}

int run_train(const TrainArgs& args) {
    slra::Manifest manifest = slra::read_manifest_file(args.manifest_path);
    slra::StageConfig config = stage_config(args, manifest.header.labels);
    auto data = slra::index_examples(manifest.split_records(slra::Split::Train),
                                     config.label_set);

    slra::Checkpoint cp;
    if (args.stage == 2 && !args.from_checkpoint.empty()) {
        slra::Checkpoint prior = slra::load_checkpoint(args.from_checkpoint);
        if (prior.stage_id != 1) {
            throw slra::StateError("stage 2 expects a stage-1 checkpoint, got stage " +
                                   std::to_string(prior.stage_id));
        }
        if (!slra::has_adapters(prior.net)) {
            throw slra::StateError("stage-1 checkpoint carries no adapters");
        }
        cp.net = std::move(prior.net);
        cp.history = std::move(prior.history);
        slra::transition(cp.net, config);
        std::cerr << "transitioned to stage 2: adapters merged, rank " << config.rank
                  << " reinstalled, head swapped to " << config.label_set.size()
                  << " labels\n";
    } else if (args.stage == 2) {
        if (!args.allow_singlestage) {
            throw slra::StateError(
                "train --stage 2 needs --from-checkpoint (or --allow-singlestage for the "
                "single-stage ablation)");
        }
        cp.net = slra::make_net(manifest.header.dimension, config.label_set,
                                slra::mix_seed(args.seed, "init"));
        slra::install_adapters(cp.net, config.rank, slra::mix_seed(args.seed, "adapters"));
        std::cerr << "single-stage ablation: fresh net, rank " << config.rank
                  << " adapters\n";
    } else {
        cp.net = slra::make_net(manifest.header.dimension, config.label_set,
                                slra::mix_seed(args.seed, "init"));
        slra::install_adapters(cp.net, config.rank, slra::mix_seed(args.seed, "adapters"));
    }

    auto records = slra::run_stage(cp.net, config, data, &std::cerr, &cp.rng_state);
    for (const auto& r : records) {
        cp.history.push_back({args.stage, r});
    }
    cp.stage_id = args.stage;
    slra::save_checkpoint(cp, args.out_path);
    std::cerr << "saved checkpoint " << args.out_path << "\n";
    return kExitOk;
}

struct TransitionArgs {
    std::string from;
    std::string out_path;
    std::string labels = "compound";
    long long rank = -1;
    std::uint64_t seed = 0;
};

int run_transition(const TransitionArgs& args) {
    slra::Checkpoint cp = slra::load_checkpoint(args.from);
    slra::StageConfig config =
        slra::stage2_defaults(slra::resolve_category_set(args.labels), 0);
    config.seed = slra::mix_seed(args.seed, "stage", 2);
    if (args.rank >= 0) config.rank = static_cast<std::size_t>(args.rank);
    slra::transition(cp.net, config);
    cp.stage_id = 2;
    slra::save_checkpoint(cp, args.out_path);
    std::cerr << "saved transitioned checkpoint " << args.out_path << "\n";
    return kExitOk;
}

struct EvalArgs {
    std::string checkpoint_path;
    std::string manifest_path;
    std::string format = "text";
    std::string out_path;
    std::string prompt_spec_path;
    std::string split = "test";
};

int run_eval(const EvalArgs& args) {
    slra::Checkpoint cp = slra::load_checkpoint(args.checkpoint_path);
    slra::Manifest manifest = slra::read_manifest_file(args.manifest_path);

    slra::EndToEndOptions options;
    options.split = slra::split_from_name(args.split);
    slra::PromptSpec spec;
    if (!args.prompt_spec_path.empty()) {
        spec = slra::load_prompt_spec(args.prompt_spec_path);
        options.prompt_spec = &spec;
    }
    slra::EvalReport report = slra::end_to_end_eval(cp.net, manifest, options);
    slra::TableFormat format =
        args.format == "csv" ? slra::TableFormat::Csv : slra::TableFormat::Text;
    emit(slra::render_table(report, format), args.out_path);
    return kExitOk;
}

struct PromptArgs {
    std::string categories;
    std::string spec_path;
    std::string out_path;
};

int run_prompt(const PromptArgs& args) {
    slra::PromptSpec spec;
    if (!args.spec_path.empty()) {
        spec = slra::load_prompt_spec(args.spec_path);
    } else {
        spec = slra::make_prompt_spec(slra::resolve_category_set(args.categories));
    }
    emit(slra::build_prompt(spec), args.out_path);
    return kExitOk;
}

struct ParseArgs {
    std::string categories;
    bool lenient = false;
};

int run_parse(const ParseArgs& args) {
    auto active = slra::resolve_category_set(args.categories);
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    std::string transcript = buf.str();

    slra::ParsedResponse parsed = args.lenient ? slra::parse_lenient(transcript, active)
                                               : slra::parse(transcript, active);
    std::ostringstream out;
    if (parsed.no_person) {
        out << R"({"lenient":)" << (parsed.lenient ? "true" : "false")
            << R"(,"verdict":"no_person"})";
    } else {
        out << R"({"category":")" << parsed.category << R"(","lenient":)"
            << (parsed.lenient ? "true" : "false") << R"(,"verdict":"category"})";
    }
    std::cout << out.str() << "\n";
    return kExitOk;
}

struct ReportArgs {
    std::string in_path;
    std::string format = "text";
    std::string out_path;
};

int run_report(const ReportArgs& args) {
    slra::EvalReport report = slra::parse_report_csv(slra::read_file(args.in_path));
    slra::TableFormat format =
        args.format == "csv" ? slra::TableFormat::Csv : slra::TableFormat::Text;
    emit(slra::render_table(report, format), args.out_path);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stage-wise LoRA fine-tuning pipeline for compound expression recognition"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate the synthetic dataset manifests");
    synth_cmd->add_option("--seed", seed, "root seed (default: SLRA_SEED or 42)")
        ->each([&](const std::string&) { seed_given = true; });
    synth_cmd->add_option("--sigma", synth.sigma, "per-coordinate noise sigma")
        ->check(CLI::NonNegativeNumber);
    synth_cmd->add_option("--per-class", synth.per_class, "examples per class")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--dim", synth.dim, "feature dimension")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->required();

    TrainArgs train;
    auto* train_cmd = app.add_subcommand("train", "run one fine-tuning stage");
    train_cmd->add_option("--stage", train.stage, "stage id")->required()->check(CLI::Range(1, 2));
    train_cmd->add_option("--manifest", train.manifest_path, "dataset manifest")->required();
    train_cmd->add_option("--out", train.out_path, "checkpoint output path")->required();
    train_cmd->add_option("--from-checkpoint", train.from_checkpoint,
                          "stage-1 checkpoint to continue from (stage 2)");
    train_cmd->add_flag("--allow-singlestage", train.allow_singlestage,
                        "permit stage 2 from scratch (ablation baseline)");
    train_cmd->add_option("--seed", seed, "root seed")->each([&](const std::string&) {
        seed_given = true;
    });
    train_cmd->add_option("--rank", train.rank, "adapter rank (default 16 / 8 by stage)");
    train_cmd->add_option("--lr", train.learning_rate, "learning rate (default 1e-4)");
    train_cmd->add_option("--epochs", train.epochs, "epochs (default 20 / 10 by stage)");
    train_cmd->add_option("--batch", train.batch_size, "batch size (default 1)");

    TransitionArgs transition;
    auto* transition_cmd =
        app.add_subcommand("transition", "merge stage-1 adapters and re-arm for stage 2");
    transition_cmd->add_option("--from", transition.from, "stage-1 checkpoint")->required();
    transition_cmd->add_option("--out", transition.out_path, "output checkpoint")->required();
    transition_cmd->add_option("--labels", transition.labels,
                               "stage-2 label set (basic|compound|challenge|csv)");
    transition_cmd->add_option("--rank", transition.rank, "stage-2 adapter rank (default 8)");
    transition_cmd->add_option("--seed", seed, "root seed")->each([&](const std::string&) {
        seed_given = true;
    });

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on a manifest split");
    eval_cmd->add_option("--checkpoint", eval.checkpoint_path, "checkpoint path")->required();
    eval_cmd->add_option("--manifest", eval.manifest_path, "dataset manifest")->required();
    eval_cmd->add_option("--format", eval.format, "table format")
        ->check(CLI::IsMember({"text", "csv"}));
    eval_cmd->add_option("--out", eval.out_path, "write the table here instead of stdout");
    eval_cmd->add_option("--prompt-spec", eval.prompt_spec_path,
                         "route predictions through the structured-output templates");
    eval_cmd->add_option("--split", eval.split, "manifest split to score")
        ->check(CLI::IsMember({"train", "val", "test"}));

    PromptArgs prompt;
    auto* prompt_cmd = app.add_subcommand("prompt", "print the assembled context prompt");
    auto* categories_opt =
        prompt_cmd->add_option("--categories", prompt.categories,
                               "category set (basic|compound|challenge|csv)");
    prompt_cmd->add_option("--spec", prompt.spec_path, "prompt spec JSON file")
        ->excludes(categories_opt);
    prompt_cmd->add_option("--out", prompt.out_path, "write the prompt here instead of stdout");

    ParseArgs parse;
    auto* parse_cmd =
        app.add_subcommand("parse", "parse a model transcript from standard input");
    parse_cmd->add_option("--categories", parse.categories, "active category set")->required();
    parse_cmd->add_flag("--lenient", parse.lenient, "fall back to scanning when strict fails");

    ReportArgs report;
    auto* report_cmd = app.add_subcommand("report", "re-render a saved csv report");
    report_cmd->add_option("--in", report.in_path, "csv report path")->required();
    report_cmd->add_option("--format", report.format, "table format")
        ->check(CLI::IsMember({"text", "csv"}));
    report_cmd->add_option("--out", report.out_path, "write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (!seed_given) seed = default_seed();
        synth.seed = train.seed = transition.seed = seed;

        if (synth_cmd->parsed()) return run_synth(synth);
        if (train_cmd->parsed()) return run_train(train);
        if (transition_cmd->parsed()) return run_transition(transition);
        if (eval_cmd->parsed()) return run_eval(eval);
        if (prompt_cmd->parsed()) {
            if (prompt.spec_path.empty() && prompt.categories.empty()) {
                std::cerr << "error: prompt needs --categories or --spec\n";
                return kExitUsage;
            }
            return run_prompt(prompt);
        }
        if (parse_cmd->parsed()) return run_parse(parse);
        if (report_cmd->parsed()) return run_report(report);
        return kExitUsage;
    } catch (const slra::StateError& e) {
        std::cerr << "state error: " << e.what() << "\n";
        return kExitState;
    } catch (const slra::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const slra::DimensionError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const slra::ContractError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
