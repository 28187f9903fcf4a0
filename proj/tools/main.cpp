#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wavesel/errors.hpp"
#include "wavesel/pipeline.hpp"

namespace {

struct Args {
    std::string config_path;
    std::string in_path;
    std::string out_path;
    std::string out_prefix;
    std::string model_path;
    std::string model_kind;
    std::string train_path;
    std::string val_path;
    std::string test_path;
    std::string features;
    bool tune = false;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavesel: scenario generation, simulation-based labeling and "
                 "classifier training for 5G waveform parameter selection"};
    app.require_subcommand(1);
    Args args;

    CLI::App* generate = app.add_subcommand("generate", "Generate the raw scenario CSV");
    generate->add_option("--config", args.config_path, "pipeline config file");
    generate->add_option("--out", args.out_path, "output raw-scenario CSV")->required();

    CLI::App* label = app.add_subcommand(
        "label", "Extract features, score all classes per scenario, balance, write the dataset");
    label->add_option("--config", args.config_path, "pipeline config file");
    label->add_option("--in", args.in_path, "input raw-scenario CSV")->required();
    label->add_option("--out", args.out_path, "output labeled CSV")->required();

    CLI::App* split = app.add_subcommand("split", "Stratified train/val/test split");
    split->add_option("--config", args.config_path, "pipeline config file");
    split->add_option("--in", args.in_path, "input labeled CSV")->required();
    split->add_option("--out-prefix", args.out_prefix, "prefix for the three split CSVs")
        ->required();

    CLI::App* train = app.add_subcommand("train", "Train one classifier");
    train->add_option("--config", args.config_path, "pipeline config file");
    train->add_option("--model", args.model_kind, "classifier kind: knn|nb|tree|mlp")
        ->required();
    train->add_option("--train", args.train_path, "training CSV")->required();
    train->add_option("--val", args.val_path, "validation CSV")->required();
    train->add_option("--out", args.out_path, "output model file")->required();
    train->add_flag("--tune", args.tune, "grid-search hyperparameters on validation accuracy");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a model on a test CSV");
    evaluate->add_option("--config", args.config_path, "pipeline config file");
    evaluate->add_option("--model", args.model_path, "model file")->required();
    evaluate->add_option("--test", args.test_path, "test CSV")->required();
    evaluate->add_option("--out-prefix", args.out_prefix,
                         "prefix for confusion/ROC/summary outputs")
        ->required();

    CLI::App* predict = app.add_subcommand("predict", "Classify one raw feature vector");
    predict->add_option("--model", args.model_path, "model file")->required();
    predict->add_option("--features", args.features, "comma-separated v1,...,v7")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        const wavesel::PipelineConfig config = args.config_path.empty()
                                                   ? wavesel::PipelineConfig{}
                                                   : wavesel::load_config(args.config_path);
        if (generate->parsed()) {
            wavesel::run_generate(config, args.out_path);
        } else if (label->parsed()) {
            wavesel::run_label(config, args.in_path, args.out_path);
        } else if (split->parsed()) {
            wavesel::run_split(config, args.in_path, args.out_prefix);
        } else if (train->parsed()) {
            wavesel::run_train(config, args.model_kind, args.train_path, args.val_path,
                               args.out_path, args.tune);
        } else if (evaluate->parsed()) {
            const wavesel::EvaluateResult r =
                wavesel::run_evaluate(config, args.model_path, args.test_path, args.out_prefix);
            std::cout << "fine_accuracy " << r.fine_accuracy << "\n"
                      << "grouped_accuracy " << r.grouped_accuracy << "\n"
                      << "macro_auc " << r.macro_auc << "\n";
        } else if (predict->parsed()) {
            std::cout << wavesel::run_predict(args.model_path, args.features);
        }
    } catch (const wavesel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
