#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wsd/corpus_index.hpp"
#include "wsd/dataset_io.hpp"
#include "wsd/ensemble.hpp"
#include "wsd/error.hpp"
#include "wsd/harness.hpp"
#include "wsd/tagger.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    wsd::RunConfig run;
    std::string layout = "lines";
    std::string grain = "fine";
    double threshold = NAN;
    std::vector<std::string> learners;
    int boost_iterations = 10;
    double svm_c = 1.0;
    int tree_depth = 3;
    bool no_case_folding = false;
    bool no_resample = false;

    fs::path index_out;
    fs::path out;
    fs::path report;
    fs::path vectors;
    fs::path model;
    fs::path answers;
    fs::path meta;
    std::optional<double> u_fraction;
    std::vector<std::string> tables;

    // Turns the raw flag values into the typed config.
    void finish() {
        run.corpus_layout = layout == "directory" ? wsd::CorpusLayout::directory : wsd::CorpusLayout::lines;
        run.grain = wsd::parse_grain(grain);
        run.index.case_folding = !no_case_folding;
        run.ensemble.resample = !no_resample;
        if (!std::isnan(threshold)) run.threshold = threshold;
        if (!learners.empty()) {
            run.ensemble.base_learners.clear();
            for (const auto& l : learners) run.ensemble.base_learners.push_back({wsd::ml::parse_learner(l)});
        }
        for (auto& l : run.ensemble.base_learners) {
            l.iterations = boost_iterations;
            l.complexity = svm_c;
            l.max_depth = tree_depth;
        }
        run.index.validate();
        run.ensemble.validate();
        if (!(run.u_trigger >= 0.0 && run.u_trigger <= 1.0)) throw wsd::Error("--u-trigger must lie in [0, 1]");
    }
};

void add_index_flags(CLI::App* app, Options& o) {
    app->add_option("--neighborhood", o.run.index.neighborhood, "Co-occurrence distance in tokens")->capture_default_str();
    app->add_option("--alpha", o.run.index.smoothing_alpha, "Additive smoothing for PMI estimates")->capture_default_str();
    app->add_flag("--no-case-folding", o.no_case_folding, "Keep corpus case");
}

void add_tagger_flags(CLI::App* app, Options& o) {
    app->add_option("--lexicon", o.run.lexicon, "Tagger lexicon (word TAB tag)")->check(CLI::ExistingFile);
    app->add_option("--rules", o.run.rules, "Tagger contextual rules")->check(CLI::ExistingFile);
}

void add_selection_flags(CLI::App* app, Options& o) {
    app->add_option("--preset", o.run.selection_preset, "Feature selection preset: fine, fine2 or none")
        ->check(CLI::IsMember({"fine", "fine2", "none"}))
        ->capture_default_str();
    app->add_option("--threshold", o.threshold, "PMI selection threshold (overrides --preset)");
    app->add_option("--grain", o.grain, "fine or coarse training labels")
        ->check(CLI::IsMember({"fine", "coarse"}))
        ->capture_default_str();
    app->add_option("--sense-map", o.run.sense_map, "Sense to coarse class map")->check(CLI::ExistingFile);
}

void add_ensemble_flags(CLI::App* app, Options& o) {
    app->add_option("--rounds", o.run.ensemble.bagging_rounds, "Bagging rounds")->capture_default_str();
    app->add_option("--bag-fraction", o.run.ensemble.bag_fraction, "Bag size as a fraction of the training set")
        ->capture_default_str();
    app->add_flag("--no-resample", o.no_resample, "Use the whole training set in every round");
    app->add_option("--learner", o.learners,
                    "Base learner (repeatable): linear_svm, logitboost_stump, logitboost_linear, boosted_tree, "
                    "rule_list");
    app->add_option("--boost-iterations", o.boost_iterations, "Boosting iterations")->capture_default_str();
    app->add_option("--svm-c", o.svm_c, "Linear SVM complexity")->capture_default_str();
    app->add_option("--tree-depth", o.tree_depth, "Boosted tree depth")->capture_default_str();
    app->add_option("--seed", o.run.seed, "Master seed")->capture_default_str();
}

wsd::Tagger make_tagger(const wsd::RunConfig& run) {
    if (run.lexicon.empty() && run.rules.empty()) return wsd::Tagger::load_default();
    const fs::path lexicon = run.lexicon.empty() ? fs::path(WSD_DATA_DIR) / "lexicon.tsv" : run.lexicon;
    return wsd::Tagger::load(lexicon, run.rules.empty() ? std::nullopt : std::optional(run.rules));
}

wsd::CooccurrenceIndex make_index(const wsd::RunConfig& run) {
    if (!run.index_file.empty()) return wsd::CooccurrenceIndex::load(run.index_file);
    if (run.corpus.empty()) throw wsd::Error("need --index or --corpus");
    return wsd::CooccurrenceIndex::build(wsd::read_corpus(run.corpus, run.corpus_layout, run.index.case_folding),
                                         run.index);
}

void write_report(const fs::path& path, const json& report) {
    if (path.empty()) return;
    wsd::write_text_file(path, report.dump(2) + "\n");
}

json score_json(const wsd::ScoreResult& s) {
    return {{"correct", s.correct}, {"answered", s.answered}, {"total", s.total}, {"recall", s.recall()}};
}

int cmd_index(Options& o) {
    const auto index = make_index(o.run);
    index.save(o.index_out);
    json report = {{"command", "index"},
                   {"corpus", o.run.corpus.string()},
                   {"output", o.index_out.string()},
                   {"estimator", index.config().estimator_description()},
                   {"documents", index.doc_lengths().size()},
                   {"tokens", index.token_total()},
                   {"pairs", index.pair_total()},
                   {"vocabulary", index.vocabulary_size()}};
    std::cout << "indexed " << index.token_total() << " tokens, " << index.vocabulary_size() << " types\n";
    write_report(o.report, report);
    return 0;
}

int cmd_extract(Options& o) {
    const auto tagger = make_tagger(o.run);
    const auto index = make_index(o.run);
    const wsd::PmiCache pmi(index);
    const auto train = wsd::parse_lexical_sample(o.run.train, tagger);
    std::vector<wsd::LexicalSample> test;
    if (!o.run.test.empty()) test = wsd::parse_lexical_sample(o.run.test, tagger);
    wsd::ExtractOptions options{o.run.effective_threshold(), o.run.grain, {}};
    if (!o.run.sense_map.empty()) options.coarse = wsd::read_sense_map(o.run.sense_map);
    if (o.run.grain == wsd::Grain::coarse && o.run.sense_map.empty()) throw wsd::Error("--grain coarse needs --sense-map");

    fs::create_directories(o.out);
    json heads = json::array();
    for (const auto& sample : train) {
        const wsd::LexicalSample* t = nullptr;
        for (const auto& s : test)
            if (s.item == sample.item) t = &s;
        const auto hf = wsd::extract_features(sample, t, pmi, options);
        wsd::save_schema(o.out / (sample.item + ".schema"), hf.schema);
        wsd::save_vectors(o.out / (sample.item + ".train.vec"), hf.train);
        if (t) wsd::save_vectors(o.out / (sample.item + ".test.vec"), hf.test);
        json meta = {{"item", hf.item},
                     {"lemma", hf.lemma},
                     {"train_instances", hf.train_instances},
                     {"train_u_fraction", hf.u_fraction},
                     {"train_vectors", hf.train.vectors.size()},
                     {"test_vectors", hf.test.vectors.size()},
                     {"semantic_extracted", hf.semantic_before},
                     {"features", hf.schema.size()}};
        wsd::write_text_file(o.out / (sample.item + ".meta.json"), meta.dump(2) + "\n");
        heads.push_back(meta);
        std::cout << sample.item << ": " << hf.schema.size() << " features, " << hf.train.vectors.size()
                  << " training vectors\n";
    }
    write_report(o.report, {{"command", "extract"}, {"config", o.run.to_json()}, {"heads", heads}});
    return 0;
}

int cmd_train(Options& o) {
    const auto set = wsd::load_vectors(o.vectors);
    auto ens = o.run.ensemble;
    ens.seed = wsd::head_seed(o.run.seed, set.head_word);
    const auto model = wsd::train_ensemble(set.vectors, ens, set.schema_hash);
    model.save(o.model);
    std::cout << set.head_word << ": trained on " << set.vectors.size() << " vectors, " << model.senses().size()
              << " senses\n";
    write_report(o.report, {{"command", "train"},
                            {"head_word", set.head_word},
                            {"vectors", set.vectors.size()},
                            {"senses", model.senses()},
                            {"seed", ens.seed},
                            {"rounds", ens.bagging_rounds}});
    return 0;
}

int cmd_predict(Options& o) {
    const auto model = wsd::EnsembleModel::load(o.model);
    const auto set = wsd::load_vectors(o.vectors, model.schema_hash());
    std::vector<wsd::AnswerRecord> answers;
    for (const auto& v : set.vectors) {
        const auto p = model.predict(v.values);
        answers.push_back({set.head_word, v.instance_id, p.sense, p.probability});
    }
    if (o.answers.empty())
        wsd::write_answers(std::cout, answers);
    else
        wsd::write_answers(o.answers, answers);
    write_report(o.report, {{"command", "predict"}, {"head_word", set.head_word}, {"answers", answers.size()}});
    return 0;
}

int cmd_relabel(Options& o) {
    double p = 0.0;
    if (o.u_fraction) {
        p = *o.u_fraction;
    } else if (!o.meta.empty()) {
        p = json::parse(wsd::read_text_file(o.meta)).at("train_u_fraction").get<double>();
    } else {
        throw wsd::Error("need --u-fraction or --meta");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw wsd::Error("U fraction must lie in [0, 1]");
    const auto answers = wsd::relabel_u(wsd::read_answers(o.answers), p, o.run.u_trigger);
    if (o.out.empty())
        wsd::write_answers(std::cout, answers);
    else
        wsd::write_answers(o.out, answers);
    return 0;
}

int cmd_score(Options& o) {
    wsd::GoldKey key;
    if (!o.run.gold_key.empty()) {
        key = wsd::read_key(o.run.gold_key);
    } else if (!o.run.test.empty()) {
        key = wsd::key_from_samples(wsd::parse_lexical_sample(o.run.test, make_tagger(o.run)));
    } else {
        throw wsd::Error("need --key or --test");
    }
    wsd::CoarseMap coarse;
    if (!o.run.sense_map.empty()) coarse = wsd::read_sense_map(o.run.sense_map);
    const auto answers = wsd::read_answers(o.answers);
    const auto fine = wsd::score(answers, key, wsd::Grain::fine, coarse);
    const auto crs = wsd::score(answers, key, wsd::Grain::coarse, coarse);
    std::printf("fine recall   %.1f%% (%zu/%zu)\n", fine.recall(), fine.correct, fine.total);
    std::printf("coarse recall %.1f%% (%zu/%zu)\n", crs.recall(), crs.correct, crs.total);
    write_report(o.report, {{"command", "score"}, {"fine", score_json(fine)}, {"coarse", score_json(crs)}});
    return 0;
}

int cmd_baseline(Options& o) {
    const auto tagger = make_tagger(o.run);
    const auto train = wsd::parse_lexical_sample(o.run.train, tagger);
    const auto test = wsd::parse_lexical_sample(o.run.test, tagger);
    std::vector<wsd::AnswerRecord> answers;
    for (const auto& t : test) {
        for (const auto& s : train) {
            if (s.item != t.item) continue;
            const auto a = wsd::baseline_mfs(s.item, s.examples, t.examples);
            answers.insert(answers.end(), a.begin(), a.end());
        }
    }
    if (o.answers.empty())
        wsd::write_answers(std::cout, answers);
    else
        wsd::write_answers(o.answers, answers);
    return 0;
}

int cmd_run(Options& o) {
    const auto result = wsd::run_pipeline(o.run);
    std::cout << wsd::render_table({{"System", result.report}});
    for (const auto& e : result.report.at("errors"))
        std::cerr << "error: " << e.at("item").get<std::string>() << " [" << e.at("stage").get<std::string>()
                  << "]: " << e.at("message").get<std::string>() << "\n";
    write_report(o.report, result.report);
    return result.report.at("errors").empty() ? 0 : 2;
}

int cmd_table(Options& o) {
    std::vector<std::pair<std::string, json>> reports;
    for (const auto& spec : o.tables) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw wsd::Error("table entries look like LABEL=report.json, got " + spec);
        reports.emplace_back(spec.substr(0, eq), json::parse(wsd::read_text_file(spec.substr(eq + 1))));
    }
    std::cout << wsd::render_table(reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Supervised word sense disambiguation toolkit"};
    app.set_config("--config", "", "Read options from a TOML/INI file");
    app.require_subcommand(1);
    Options o;

    auto* index = app.add_subcommand("index", "Build a co-occurrence index from a corpus");
    index->add_option("--corpus", o.run.corpus, "Corpus file or directory")->required()->check(CLI::ExistingPath);
    index->add_option("--layout", o.layout, "lines (one document per line) or directory (one per file)")
        ->check(CLI::IsMember({"lines", "directory"}))
        ->capture_default_str();
    index->add_option("-o,--output", o.index_out, "Index file to write")->required();
    add_index_flags(index, o);

    auto* extract = app.add_subcommand("extract", "Extract feature schemas and vectors per head word");
    extract->add_option("--train", o.run.train, "Training dataset XML")->required()->check(CLI::ExistingFile);
    extract->add_option("--test", o.run.test, "Test dataset XML")->check(CLI::ExistingFile);
    extract->add_option("--index", o.run.index_file, "Prebuilt index")->check(CLI::ExistingFile);
    extract->add_option("--corpus", o.run.corpus, "Corpus to index on the fly")->check(CLI::ExistingPath);
    extract->add_option("--layout", o.layout, "Corpus layout")->check(CLI::IsMember({"lines", "directory"}));
    extract->add_option("-o,--output-dir", o.out, "Directory for schema, vector and meta files")->required();
    add_index_flags(extract, o);
    add_tagger_flags(extract, o);
    add_selection_flags(extract, o);

    auto* train = app.add_subcommand("train", "Train an ensemble model from a vector file");
    train->add_option("--vectors", o.vectors, "Training vectors")->required()->check(CLI::ExistingFile);
    train->add_option("-o,--model", o.model, "Model file to write")->required();
    add_ensemble_flags(train, o);

    auto* predict = app.add_subcommand("predict", "Label test vectors with a trained model");
    predict->add_option("--model", o.model, "Model file")->required()->check(CLI::ExistingFile);
    predict->add_option("--vectors", o.vectors, "Test vectors")->required()->check(CLI::ExistingFile);
    predict->add_option("-o,--answers", o.answers, "Answer file to write (default stdout)");

    auto* relabel = app.add_subcommand("relabel-u", "Relabel the least confident answers as U");
    relabel->add_option("--answers", o.answers, "Answer file")->required()->check(CLI::ExistingFile);
    relabel->add_option("--u-fraction", o.u_fraction, "Training U fraction");
    relabel->add_option("--meta", o.meta, "Meta file written by extract")->check(CLI::ExistingFile);
    relabel->add_option("--u-trigger", o.run.u_trigger, "Minimum U fraction that triggers relabeling")
        ->capture_default_str();
    relabel->add_option("-o,--output", o.out, "Answer file to write (default stdout)");

    auto* score = app.add_subcommand("score", "Fine and coarse recall of an answer file");
    score->add_option("--answers", o.answers, "Answer file")->required()->check(CLI::ExistingFile);
    score->add_option("--key", o.run.gold_key, "Gold key file")->check(CLI::ExistingFile);
    score->add_option("--test", o.run.test, "Labeled test dataset (alternative to --key)")->check(CLI::ExistingFile);
    score->add_option("--sense-map", o.run.sense_map, "Sense to coarse class map")->check(CLI::ExistingFile);
    add_tagger_flags(score, o);

    auto* baseline = app.add_subcommand("baseline-mfs", "Most-frequent-sense answers");
    baseline->add_option("--train", o.run.train, "Training dataset XML")->required()->check(CLI::ExistingFile);
    baseline->add_option("--test", o.run.test, "Test dataset XML")->required()->check(CLI::ExistingFile);
    baseline->add_option("-o,--answers", o.answers, "Answer file to write (default stdout)");
    add_tagger_flags(baseline, o);

    auto* run = app.add_subcommand("run", "Full pipeline: index, extract, train, predict, relabel, score");
    run->add_option("--corpus", o.run.corpus, "Corpus file or directory")->check(CLI::ExistingPath);
    run->add_option("--layout", o.layout, "Corpus layout")->check(CLI::IsMember({"lines", "directory"}));
    run->add_option("--index", o.run.index_file, "Prebuilt index (skips --corpus)")->check(CLI::ExistingFile);
    run->add_option("--train", o.run.train, "Training dataset XML")->required()->check(CLI::ExistingFile);
    run->add_option("--test", o.run.test, "Test dataset XML")->required()->check(CLI::ExistingFile);
    run->add_option("--key", o.run.gold_key, "Gold key (default: labels in the test file)")->check(CLI::ExistingFile);
    run->add_option("-o,--output-dir", o.run.output_dir, "Directory for answers, baseline and report");
    run->add_option("--u-trigger", o.run.u_trigger, "Minimum training U fraction that triggers relabeling")
        ->capture_default_str();
    add_index_flags(run, o);
    add_tagger_flags(run, o);
    add_selection_flags(run, o);
    add_ensemble_flags(run, o);

    auto* table = app.add_subcommand("table", "Render recall tables from run reports");
    table->add_option("reports", o.tables, "LABEL=report.json entries")->required();

    for (auto* sub : {index, extract, train, predict, relabel, score, baseline, run})
        sub->add_option("--report", o.report, "Write a JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        o.finish();
        if (*index) return cmd_index(o);
        if (*extract) return cmd_extract(o);
        if (*train) return cmd_train(o);
        if (*predict) return cmd_predict(o);
        if (*relabel) return cmd_relabel(o);
        if (*score) return cmd_score(o);
        if (*baseline) return cmd_baseline(o);
        if (*run) return cmd_run(o);
        if (*table) return cmd_table(o);
    } catch (const std::exception& e) {
        std::cerr << "wsd: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
