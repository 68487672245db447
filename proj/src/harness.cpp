#include "wsd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "wsd/binary_io.hpp"
#include "wsd/error.hpp"

namespace wsd {

using nlohmann::json;

std::string_view grain_name(Grain g) { return g == Grain::fine ? "fine" : "coarse"; }

Grain parse_grain(std::string_view s) {
    if (s == "fine") return Grain::fine;
    if (s == "coarse") return Grain::coarse;
    throw Error("unknown grain \"" + std::string(s) + "\" (expected fine or coarse)");
}

std::vector<AnswerRecord> relabel_u(std::vector<AnswerRecord> predictions, double train_u_fraction, double trigger) {
    if (train_u_fraction <= 0.0 || train_u_fraction < trigger || predictions.empty()) return predictions;
    const auto n = predictions.size();
    // the epsilon keeps e.g. 0.1 * 30 from rounding up to 4
    const auto k = std::min(n, static_cast<std::size_t>(std::ceil(train_u_fraction * static_cast<double>(n) - 1e-9)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        if (predictions[a].probability != predictions[b].probability)
            return predictions[a].probability < predictions[b].probability;
        return predictions[a].instance_id < predictions[b].instance_id;
    });
    for (std::size_t i = 0; i < k; ++i) predictions[order[i]].sense = kUnassignable;
    return predictions;
}

ScoreResult score(const std::vector<AnswerRecord>& answers, const GoldKey& gold, Grain grain, const CoarseMap& coarse) {
    auto map = [&](const std::string& s) -> std::string {
        if (grain == Grain::fine || s == kUnassignable) return s;
        auto it = coarse.find(s);
        return it == coarse.end() ? s : it->second;
    };
    ScoreResult r;
    r.total = gold.size();
    std::map<std::string, bool> seen;
    for (const auto& a : answers) {
        auto it = gold.find(a.instance_id);
        if (it == gold.end()) throw Error("score: answer for unknown instance " + a.instance_id);
        if (!seen.emplace(a.instance_id, true).second) throw Error("score: duplicate answer for instance " + a.instance_id);
        ++r.answered;
        const auto predicted = map(a.sense);
        const auto& senses = it->second.senses;
        if (std::any_of(senses.begin(), senses.end(), [&](const auto& g) { return map(g) == predicted; })) ++r.correct;
    }
    return r;
}

std::vector<AnswerRecord> baseline_mfs(const std::string& head_word, const std::vector<Example>& training,
                                       const std::vector<Example>& test) {
    std::map<std::string, std::size_t> freq;
    std::size_t labeled = 0;
    for (const auto& ex : training)
        if (auto l = ex.label()) {
            ++freq[*l];
            ++labeled;
        }
    std::vector<AnswerRecord> out;
    if (labeled == 0) return out;
    // std::map iterates in key order, so strict > keeps the smallest id on ties
    auto best = freq.begin();
    for (auto it = freq.begin(); it != freq.end(); ++it)
        if (it->second > best->second) best = it;
    const double p = static_cast<double>(best->second) / static_cast<double>(labeled);
    for (const auto& ex : test) out.push_back({head_word, ex.instance_id, best->first, p});
    return out;
}

double unassignable_fraction(const std::vector<Example>& examples) {
    std::size_t labeled = 0, u = 0;
    for (const auto& ex : examples)
        if (auto l = ex.label()) {
            ++labeled;
            if (*l == kUnassignable) ++u;
        }
    return labeled == 0 ? 0.0 : static_cast<double>(u) / static_cast<double>(labeled);
}

HeadFeatures extract_features(const LexicalSample& train, const LexicalSample* test, const PmiCache& pmi,
                              const ExtractOptions& options) {
    HeadFeatures hf;
    hf.item = train.item;
    hf.lemma = train.lemma;
    auto examples = options.grain == Grain::coarse ? coarse_relabel(train.examples, options.coarse) : train.examples;
    hf.train_instances = examples.size();
    hf.u_fraction = unassignable_fraction(examples);

    std::vector<LabeledWindow> labeled;
    std::vector<const Example*> used;
    for (const auto& ex : examples) {
        auto l = ex.label();
        if (!l || *l == kUnassignable) continue;
        labeled.push_back({select_window(ex), *l});
        used.push_back(&ex);
    }
    if (labeled.empty()) throw Error("no labeled non-U training examples");

    const auto full = generate_schema(train.lemma, labeled);
    hf.semantic_before = full.semantic.size();
    hf.schema = select_features(full, train.lemma, pmi, options.threshold);
    const auto hash = schema_hash(hf.schema);

    hf.train = {train.item, hash, hf.schema.size(), {}};
    for (std::size_t i = 0; i < labeled.size(); ++i)
        hf.train.vectors.push_back(vectorize(labeled[i].window, hf.schema, pmi, used[i]->instance_id, labeled[i].sense));
    hf.test = {train.item, hash, hf.schema.size(), {}};
    if (test) {
        for (const auto& ex : test->examples)
            hf.test.vectors.push_back(vectorize(select_window(ex), hf.schema, pmi, ex.instance_id, ex.label()));
    }
    return hf;
}

double RunConfig::effective_threshold() const { return threshold ? *threshold : selection_threshold(selection_preset); }

void RunConfig::validate() const {
    if (index_file.empty() && corpus.empty()) throw Error("run config: a corpus or a prebuilt index is required");
    if (train.empty()) throw Error("run config: a training dataset is required");
    if (test.empty()) throw Error("run config: a test dataset is required");
    if (!(u_trigger >= 0.0 && u_trigger <= 1.0)) throw Error("run config: U trigger must lie in [0, 1]");
    if (grain == Grain::coarse && sense_map.empty()) throw Error("run config: coarse grain needs a sense map");
    index.validate();
    ensemble.validate();
    (void)effective_threshold();
    for (const auto* p : {&corpus, &index_file, &train, &test, &sense_map, &gold_key, &lexicon, &rules})
        if (!p->empty() && !std::filesystem::exists(*p)) throw Error("run config: path not found: " + p->string());
}

json RunConfig::to_json() const {
    json learners = json::array();
    for (const auto& l : ensemble.base_learners)
        learners.push_back({{"kind", ml::learner_name(l.kind)},
                            {"iterations", l.iterations},
                            {"complexity", l.complexity},
                            {"max_depth", l.max_depth}});
    const double thr = effective_threshold();
    return {
        {"corpus", corpus.string()},
        {"corpus_layout", corpus_layout == CorpusLayout::lines ? "lines" : "directory"},
        {"index_file", index_file.string()},
        {"train", train.string()},
        {"test", test.string()},
        {"sense_map", sense_map.string()},
        {"gold_key", gold_key.string()},
        {"lexicon", lexicon.string()},
        {"rules", rules.string()},
        {"neighborhood", index.neighborhood},
        {"smoothing_alpha", index.smoothing_alpha},
        {"case_folding", index.case_folding},
        {"selection_preset", selection_preset},
        {"threshold", std::isfinite(thr) ? json(thr) : json(thr < 0 ? "-inf" : "inf")},
        {"bagging_rounds", ensemble.bagging_rounds},
        {"bag_fraction", ensemble.bag_fraction},
        {"resample", ensemble.resample},
        {"base_learners", learners},
        {"u_trigger", u_trigger},
        {"grain", grain_name(grain)},
        {"seed", seed},
    };
}

std::uint64_t head_seed(std::uint64_t master, const std::string& item) {
    return ml::derive_seed(master, fnv1a64(item));
}

namespace {

json score_json(const ScoreResult& s) {
    return {{"correct", s.correct}, {"answered", s.answered}, {"total", s.total}, {"recall", s.recall()}};
}

GoldKey restrict_key(const GoldKey& key, const std::string& item) {
    GoldKey out;
    for (const auto& [id, e] : key)
        if (e.head_word == item) out.emplace(id, e);
    return out;
}

GoldKey key_by_item(const std::vector<LexicalSample>& samples) {
    GoldKey key;
    for (const auto& s : samples)
        for (const auto& ex : s.examples)
            if (!ex.labels.empty()) key[ex.instance_id] = {s.item, ex.labels};
    return key;
}

}  // namespace

RunResult run_experiment(const std::vector<LexicalSample>& train, const std::vector<LexicalSample>& test,
                         const CooccurrenceIndex& index, const RunConfig& config, const std::optional<GoldKey>& gold,
                         const TrainingAudit& audit) {
    const PmiCache pmi(index);
    const GoldKey key = gold ? *gold : key_by_item(test);
    CoarseMap coarse;
    if (!config.sense_map.empty()) coarse = read_sense_map(config.sense_map);

    ExtractOptions options{config.effective_threshold(), config.grain, coarse};
    RunResult result;
    json heads = json::array();
    json errors = json::array();

    for (const auto& sample : train) {
        const auto match = std::find_if(test.begin(), test.end(), [&](const auto& t) { return t.item == sample.item; });
        const LexicalSample* test_sample = match == test.end() ? nullptr : &*match;
        json head = {{"item", sample.item}, {"lemma", sample.lemma}};
        std::string stage = "extract";
        try {
            auto hf = extract_features(sample, test_sample, pmi, options);
            std::size_t pre = 0, fol = 0;
            for (const auto& f : hf.schema.semantic) (f.direction == Direction::pre ? pre : fol) += 1;
            head["train_instances"] = hf.train_instances;
            head["train_used"] = hf.train.vectors.size();
            head["train_u_fraction"] = hf.u_fraction;
            head["test_instances"] = hf.test.vectors.size();
            head["features"] = {{"syntactic", hf.schema.syntactic.size()},
                                {"semantic_extracted", hf.semantic_before},
                                {"semantic_selected", hf.schema.semantic.size()},
                                {"pre", pre},
                                {"fol", fol},
                                {"avg", hf.schema.averages.size()},
                                {"total", hf.schema.size()}};

            stage = "train";
            if (audit) audit(sample.item, hf.train.vectors);
            auto ens = config.ensemble;
            ens.seed = head_seed(config.seed, sample.item);
            const auto model = train_ensemble(hf.train.vectors, ens, hf.train.schema_hash);

            stage = "predict";
            std::vector<AnswerRecord> answers;
            for (const auto& v : hf.test.vectors) {
                const auto p = model.predict(v.values);
                answers.push_back({sample.item, v.instance_id, p.sense, p.probability});
            }

            stage = "relabel-u";
            const bool triggered = hf.u_fraction > 0.0 && hf.u_fraction >= config.u_trigger;
            answers = relabel_u(std::move(answers), hf.u_fraction, config.u_trigger);
            head["u_relabel_triggered"] = triggered;
            head["relabeled_u"] = std::count_if(answers.begin(), answers.end(),
                                                [](const auto& a) { return a.sense == kUnassignable; });

            stage = "score";
            const auto baseline =
                baseline_mfs(sample.item, sample.examples, test_sample ? test_sample->examples : std::vector<Example>{});
            const auto head_key = restrict_key(key, sample.item);
            head["system"] = {{"fine", score_json(score(answers, head_key, Grain::fine, coarse))},
                              {"coarse", score_json(score(answers, head_key, Grain::coarse, coarse))}};
            head["mfs"] = {{"fine", score_json(score(baseline, head_key, Grain::fine, coarse))},
                           {"coarse", score_json(score(baseline, head_key, Grain::coarse, coarse))}};
            result.answers.insert(result.answers.end(), answers.begin(), answers.end());
            result.baseline.insert(result.baseline.end(), baseline.begin(), baseline.end());
        } catch (const Error& e) {
            errors.push_back({{"item", sample.item}, {"stage", stage}, {"message", e.what()}});
            head["error"] = std::string(e.what());
        }
        heads.push_back(std::move(head));
    }

    json micro;
    auto micro_for = [&](const std::vector<AnswerRecord>& answers) -> json {
        return {{"fine", score_json(score(answers, key, Grain::fine, coarse))},
                {"coarse", score_json(score(answers, key, Grain::coarse, coarse))}};
    };
    micro["system"] = micro_for(result.answers);
    micro["mfs"] = micro_for(result.baseline);

    result.report = {
        {"config", config.to_json()},
        {"estimator", index.config().estimator_description()},
        {"index", {{"documents", index.doc_lengths().size()},
                   {"tokens", index.token_total()},
                   {"pairs", index.pair_total()},
                   {"vocabulary", index.vocabulary_size()}}},
        {"heads", heads},
        {"micro", micro},
        {"errors", errors},
    };
    return result;
}

RunResult run_pipeline(const RunConfig& config, const TrainingAudit& audit) {
    config.validate();
    Tagger tagger;
    if (config.lexicon.empty() && config.rules.empty()) {
        tagger = Tagger::load_default();
    } else {
        const std::filesystem::path lexicon =
            config.lexicon.empty() ? std::filesystem::path(WSD_DATA_DIR) / "lexicon.tsv" : config.lexicon;
        tagger = Tagger::load(lexicon, config.rules.empty() ? std::nullopt : std::optional(config.rules));
    }

    RunConfig effective = config;
    CooccurrenceIndex index = config.index_file.empty()
                                  ? CooccurrenceIndex::build(read_corpus(config.corpus, config.corpus_layout,
                                                                         config.index.case_folding),
                                                             config.index)
                                  : CooccurrenceIndex::load(config.index_file);
    effective.index = index.config();

    const auto train = parse_lexical_sample(config.train, tagger);
    const auto test = parse_lexical_sample(config.test, tagger);
    std::optional<GoldKey> gold;
    if (!config.gold_key.empty()) gold = read_key(config.gold_key);

    auto result = run_experiment(train, test, index, effective, gold, audit);

    if (!config.output_dir.empty()) {
        std::filesystem::create_directories(config.output_dir);
        write_answers(config.output_dir / "answers.txt", result.answers);
        write_answers(config.output_dir / "baseline_mfs.txt", result.baseline);
        write_text_file(config.output_dir / "report.json", result.report.dump(2) + "\n");
        write_text_file(config.output_dir / "table.txt", render_table({{"System", result.report}}));
    }
    return result;
}

std::string render_table(const std::vector<std::pair<std::string, json>>& reports) {
    auto pct = [](const json& v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f%%", v.get<double>());
        return std::string(buf);
    };
    auto row = [](const std::string& a, const std::string& b, const std::string& c) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%-28s %21s %23s\n", a.c_str(), b.c_str(), c.c_str());
        return std::string(buf);
    };
    std::string rule(74, '-');
    rule += '\n';
    std::string out = rule + row("System", "Fine-Grained Recall", "Coarse-Grained Recall") + rule;
    for (const auto& [label, report] : reports) {
        const auto& sys = report.at("micro").at("system");
        const bool coarse_run = report.at("config").at("grain") == "coarse";
        out += row(label, coarse_run ? "NA" : pct(sys.at("fine").at("recall")), pct(sys.at("coarse").at("recall")));
    }
    if (!reports.empty()) {
        const auto& mfs = reports.front().second.at("micro").at("mfs");
        out += row("Most Frequent Sense", pct(mfs.at("fine").at("recall")), pct(mfs.at("coarse").at("recall")));
    }
    out += rule;
    return out;
}

}  // namespace wsd
