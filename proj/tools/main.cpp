#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mlabel/bench.hpp"
#include "mlabel/classify.hpp"
#include "mlabel/common.hpp"
#include "mlabel/esa.hpp"
#include "mlabel/eval.hpp"
#include "mlabel/vsm_index.hpp"

namespace {

using mlabel::error;

// Flat key=value config file; '#' starts a comment. Values feed option
// defaults, so command-line flags always win.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    auto trim = [](std::string s) {
        const auto from = s.find_first_not_of(" \t\r");
        const auto to = s.find_last_not_of(" \t\r");
        return from == std::string::npos ? std::string() : s.substr(from, to - from + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw error("config line " + std::to_string(line_no) + " is not key=value: " + path);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw error("config line " + std::to_string(line_no) + " has no key");
        kv[key] = value;
    }
    return kv;
}

// Resolution order: flag (handled by CLI11) > config file > environment
// (paths only, MLABEL_<KEY>) > built-in default.
struct Defaults {
    std::map<std::string, std::string> config;

    std::string path(const std::string& key, const std::string& builtin = "") const {
        auto it = config.find(key);
        if (it != config.end()) return it->second;
        std::string env_key = "MLABEL_" + key;
        for (auto& c : env_key) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* env = std::getenv(env_key.c_str())) return env;
        return builtin;
    }

    template <typename T>
    T value(const std::string& key, T builtin) const {
        auto it = config.find(key);
        if (it == config.end()) return builtin;
        std::istringstream is(it->second);
        T out;
        if (!(is >> out)) throw error("config value for \"" + key + "\" is not usable: " + it->second);
        return out;
    }

    std::string str(const std::string& key, const std::string& builtin) const {
        auto it = config.find(key);
        return it == config.end() ? builtin : it->second;
    }
};

void require(const CLI::App& cmd, const std::string& flag, const std::string& value) {
    if (value.empty()) throw CLI::RequiredError(flag + " (for " + cmd.get_name() + ")");
}

void require_file(const std::string& what, const std::string& path) {
    if (!std::filesystem::exists(path))
        throw error(what + " path does not exist: " + path);
}

void log_config(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string line = "running " + cmd + " with";
    for (const auto& [k, v] : kv) line += " " + k + "=" + v;
    mlabel::log_info(line);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-label document annotation engine"};
    app.require_subcommand(1);
    app.fallthrough();

    // --config is position-independent; pre-scan so its values can seed the
    // option defaults before parsing.
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
    }
    Defaults defaults;
    std::string config_opt;
    app.add_option("--config", config_opt, "flat key=value config file with option defaults");

    try {
        if (!config_path.empty()) defaults.config = load_config(config_path);

        // ---- build-index ----
        auto* cmd_index = app.add_subcommand("build-index", "build a TF.IDF inverted index");
        struct {
            std::string corpus, out;
        } bi{defaults.path("corpus"), defaults.path("out")};
        cmd_index->add_option("--corpus", bi.corpus, "annotated corpus (JSON Lines)");
        cmd_index->add_option("--out", bi.out, "output index file");

        // ---- train ----
        auto* cmd_train = app.add_subcommand("train", "train a label ranker over kNN features");
        struct {
            std::string corpus, index, vocab, out, algo;
            std::uint64_t seed;
            std::size_t k;
            std::uint32_t rf_trees;
            unsigned threads;
        } tr{defaults.path("corpus"),
             defaults.path("index"),
             defaults.path("vocab"),
             defaults.path("out"),
             defaults.str("algo", "rf"),
             defaults.value<std::uint64_t>("seed", 42),
             defaults.value<std::size_t>("k", 25),
             defaults.value<std::uint32_t>("rf_trees", 100),
             defaults.value<unsigned>("threads", 0)};
        cmd_train->add_option("--corpus", tr.corpus, "training corpus (JSON Lines, labeled)");
        cmd_train->add_option("--index", tr.index, "index built over the training corpus");
        cmd_train->add_option("--vocab", tr.vocab, "label vocabulary (JSON)");
        cmd_train->add_option("--algo", tr.algo, "nb | dt | rf")
            ->check(CLI::IsMember({"nb", "dt", "rf"}));
        cmd_train->add_option("--k", tr.k, "neighbors per document")->check(CLI::PositiveNumber);
        cmd_train->add_option("--seed", tr.seed, "training seed");
        cmd_train->add_option("--rf-trees", tr.rf_trees, "random-forest size")
            ->check(CLI::PositiveNumber);
        cmd_train->add_option("--threads", tr.threads, "worker cap (0 = auto)");
        cmd_train->add_option("--out", tr.out, "output model file");

        // ---- classify ----
        auto* cmd_classify = app.add_subcommand("classify", "annotate documents with the model");
        struct {
            std::string model, index, vocab, input, out, strategy;
            double alpha, tau;
            std::size_t k;
            bool exclude_self;
            unsigned threads;
        } cl{defaults.path("model"),
             defaults.path("index"),
             defaults.path("vocab"),
             defaults.path("input"),
             defaults.path("out"),
             defaults.str("strategy", "cutoff"),
             defaults.value<double>("alpha", 1.6),
             defaults.value<double>("tau", 0.5),
             defaults.value<std::size_t>("k", 0),
             false,
             defaults.value<unsigned>("threads", 0)};
        cmd_classify->add_option("--model", cl.model, "trained model file");
        cmd_classify->add_option("--index", cl.index, "index of the annotated collection");
        cmd_classify->add_option("--vocab", cl.vocab, "label vocabulary (JSON)");
        cmd_classify->add_option("--input", cl.input, "documents to annotate (JSON Lines)");
        cmd_classify->add_option("--strategy", cl.strategy, "threshold | avgsize | cutoff")
            ->check(CLI::IsMember({"threshold", "avgsize", "cutoff"}));
        cmd_classify->add_option("--alpha", cl.alpha, "cut-off constant");
        cmd_classify->add_option("--tau", cl.tau, "threshold strategy minimum score");
        cmd_classify->add_option("--k", cl.k, "neighbors per document (0 = model default)");
        cmd_classify->add_flag("--exclude-self", cl.exclude_self,
                               "drop the query id from its own neighbor list");
        cmd_classify->add_option("--threads", cl.threads, "worker cap (0 = auto)");
        cmd_classify->add_option("--out", cl.out, "output predictions (JSON Lines)");

        // ---- evaluate ----
        auto* cmd_eval = app.add_subcommand("evaluate", "example-based metrics for a run");
        struct {
            std::string gold, pred, out;
        } ev{defaults.path("gold"), defaults.path("pred"), defaults.path("out")};
        cmd_eval->add_option("--gold", ev.gold, "gold corpus (JSON Lines, labeled)");
        cmd_eval->add_option("--pred", ev.pred, "predictions (JSON Lines)");
        cmd_eval->add_option("--out", ev.out, "report JSON path (optional)");

        // ---- esa-build ----
        auto* cmd_esa_build = app.add_subcommand("esa-build", "build term-concept associations");
        struct {
            std::string corpus, out, measure;
            std::uint32_t min_df, cap;
        } eb{defaults.path("corpus"), defaults.path("out"), defaults.str("measure", "jaccard"),
             defaults.value<std::uint32_t>("min_df", 5), defaults.value<std::uint32_t>("cap", 200)};
        cmd_esa_build->add_option("--corpus", eb.corpus, "annotated corpus (JSON Lines)");
        cmd_esa_build->add_option("--measure", eb.measure, "jaccard | tficf")
            ->check(CLI::IsMember({"jaccard", "tficf"}));
        cmd_esa_build->add_option("--min-df", eb.min_df, "minimum documents per term")
            ->check(CLI::PositiveNumber);
        cmd_esa_build->add_option("--cap", eb.cap, "terms kept per concept vector")
            ->check(CLI::PositiveNumber);
        cmd_esa_build->add_option("--out", eb.out, "output association file");

        // ---- esa-classify ----
        auto* cmd_esa_classify = app.add_subcommand("esa-classify", "rank concepts by relevance");
        struct {
            std::string assoc, input, out, n;
            unsigned threads;
        } ec{defaults.path("assoc"), defaults.path("input"), defaults.path("out"),
             defaults.str("n", "gold"), defaults.value<unsigned>("threads", 0)};
        cmd_esa_classify->add_option("--assoc", ec.assoc, "association file from esa-build");
        cmd_esa_classify->add_option("--input", ec.input, "documents to annotate (JSON Lines)");
        cmd_esa_classify->add_option("--n", ec.n,
                                     "labels per document: gold (use |gold|) or a fixed count");
        cmd_esa_classify->add_option("--threads", ec.threads, "worker cap (0 = auto)");
        cmd_esa_classify->add_option("--out", ec.out, "output predictions (JSON Lines)");

        // ---- bench ----
        auto* cmd_bench = app.add_subcommand("bench", "planted-topic comparison harness");
        struct {
            std::string suite, out;
            std::uint64_t seed;
            std::size_t topics, train_docs, test_docs, k, noise_vocab;
            double alpha, tau;
            std::uint32_t rf_trees;
            unsigned threads;
        } bn{defaults.str("suite", "synthetic"),
             defaults.path("out"),
             defaults.value<std::uint64_t>("seed", 42),
             defaults.value<std::size_t>("topics", 50),
             defaults.value<std::size_t>("train_docs", 2000),
             defaults.value<std::size_t>("test_docs", 500),
             defaults.value<std::size_t>("k", 25),
             defaults.value<std::size_t>("noise_vocab", 120),
             defaults.value<double>("alpha", 1.6),
             defaults.value<double>("tau", 0.5),
             defaults.value<std::uint32_t>("rf_trees", 100),
             defaults.value<unsigned>("threads", 0)};
        cmd_bench->add_option("--suite", bn.suite, "benchmark suite")
            ->check(CLI::IsMember({"synthetic"}));
        cmd_bench->add_option("--seed", bn.seed, "generator and training seed");
        cmd_bench->add_option("--topics", bn.topics, "planted topics")->check(CLI::PositiveNumber);
        cmd_bench->add_option("--train-docs", bn.train_docs, "training documents")
            ->check(CLI::PositiveNumber);
        cmd_bench->add_option("--test-docs", bn.test_docs, "test documents")
            ->check(CLI::PositiveNumber);
        cmd_bench->add_option("--noise-vocab", bn.noise_vocab, "distinct noise terms")
            ->check(CLI::PositiveNumber);
        cmd_bench->add_option("--k", bn.k, "neighbors per document")->check(CLI::PositiveNumber);
        cmd_bench->add_option("--alpha", bn.alpha, "cut-off constant");
        cmd_bench->add_option("--tau", bn.tau, "threshold strategy minimum score");
        cmd_bench->add_option("--rf-trees", bn.rf_trees, "random-forest size")
            ->check(CLI::PositiveNumber);
        cmd_bench->add_option("--threads", bn.threads, "worker cap (0 = auto)");
        cmd_bench->add_option("--out", bn.out, "artifact directory (optional)");

        app.parse(argc, argv);

        auto validate_ranges = [&](double alpha, double tau, std::size_t k, bool k_zero_ok) {
            if (alpha <= 0.0) throw error("alpha must be > 0");
            if (tau <= 0.0 || tau >= 1.0) throw error("tau must lie in (0, 1)");
            if (!k_zero_ok && k == 0) throw error("k must be >= 1");
        };

        if (cmd_index->parsed()) {
            require(*cmd_index, "--corpus", bi.corpus);
            require(*cmd_index, "--out", bi.out);
            require_file("corpus", bi.corpus);
            log_config("build-index", {{"corpus", bi.corpus}, {"out", bi.out}});
            const auto docs = mlabel::load_corpus(bi.corpus);
            const auto index = mlabel::VectorIndex::build(docs);
            index.save(bi.out);
            mlabel::log_info("indexed " + std::to_string(index.n_docs()) + " documents, " +
                             std::to_string(index.n_terms()) + " terms -> " + bi.out);
        } else if (cmd_train->parsed()) {
            require(*cmd_train, "--corpus", tr.corpus);
            require(*cmd_train, "--index", tr.index);
            require(*cmd_train, "--vocab", tr.vocab);
            require(*cmd_train, "--out", tr.out);
            require_file("corpus", tr.corpus);
            require_file("index", tr.index);
            require_file("vocab", tr.vocab);
            validate_ranges(1.6, 0.5, tr.k, false);
            log_config("train", {{"corpus", tr.corpus},
                                 {"index", tr.index},
                                 {"vocab", tr.vocab},
                                 {"algo", tr.algo},
                                 {"k", std::to_string(tr.k)},
                                 {"seed", std::to_string(tr.seed)},
                                 {"rf_trees", std::to_string(tr.rf_trees)},
                                 {"out", tr.out}});
            const auto docs = mlabel::load_corpus(tr.corpus);
            const auto index = mlabel::VectorIndex::load(tr.index);
            const auto vocab = mlabel::load_vocabulary(tr.vocab);
            const auto assembled =
                mlabel::assemble_training_set(docs, index, vocab, tr.k, tr.threads);
            mlabel::log_info("assembled " + std::to_string(assembled.instances.size()) +
                             " training instances (" + std::to_string(assembled.skipped_docs) +
                             " documents skipped)");
            mlabel::RandomForestOptions rf;
            rf.n_trees = tr.rf_trees;
            const auto model =
                mlabel::train(assembled.instances, mlabel::parse_algorithm(tr.algo), tr.seed,
                              static_cast<std::uint32_t>(tr.k), rf, tr.threads);
            model.save(tr.out);
            mlabel::log_info("model written to " + tr.out);
        } else if (cmd_classify->parsed()) {
            require(*cmd_classify, "--model", cl.model);
            require(*cmd_classify, "--index", cl.index);
            require(*cmd_classify, "--vocab", cl.vocab);
            require(*cmd_classify, "--input", cl.input);
            require(*cmd_classify, "--out", cl.out);
            require_file("model", cl.model);
            require_file("index", cl.index);
            require_file("vocab", cl.vocab);
            require_file("input", cl.input);
            validate_ranges(cl.alpha, cl.tau, cl.k, /*k_zero_ok=*/true);
            const auto model = mlabel::RankerModel::load(cl.model);
            mlabel::ClassifyOptions opts;
            opts.k = cl.k == 0 ? model.k : cl.k;
            opts.strategy = mlabel::parse_strategy(cl.strategy);
            opts.tau = cl.tau;
            opts.alpha = cl.alpha;
            opts.exclude_self = cl.exclude_self;
            log_config("classify", {{"model", cl.model},
                                    {"index", cl.index},
                                    {"vocab", cl.vocab},
                                    {"input", cl.input},
                                    {"strategy", cl.strategy},
                                    {"k", std::to_string(opts.k)},
                                    {"alpha", std::to_string(cl.alpha)},
                                    {"tau", std::to_string(cl.tau)},
                                    {"out", cl.out}});
            const auto index = mlabel::VectorIndex::load(cl.index);
            const auto vocab = mlabel::load_vocabulary(cl.vocab);
            const auto docs = mlabel::load_corpus(cl.input);
            const auto preds =
                mlabel::classify_all(docs, model, index, vocab, opts, cl.threads);
            mlabel::save_predictions(preds, cl.out);
            mlabel::log_info(std::to_string(preds.size()) + " predictions -> " + cl.out);
        } else if (cmd_eval->parsed()) {
            require(*cmd_eval, "--gold", ev.gold);
            require(*cmd_eval, "--pred", ev.pred);
            require_file("gold", ev.gold);
            require_file("pred", ev.pred);
            log_config("evaluate", {{"gold", ev.gold}, {"pred", ev.pred}, {"out", ev.out}});
            const auto report = mlabel::evaluate_run(ev.gold, ev.pred);
            std::cout << mlabel::report_table(report);
            if (!ev.out.empty()) {
                std::ofstream out(ev.out, std::ios::binary);
                if (!out) throw error("cannot write report: " + ev.out);
                out << mlabel::report_to_json(report) << "\n";
                mlabel::log_info("report -> " + ev.out);
            }
        } else if (cmd_esa_build->parsed()) {
            require(*cmd_esa_build, "--corpus", eb.corpus);
            require(*cmd_esa_build, "--out", eb.out);
            require_file("corpus", eb.corpus);
            log_config("esa-build", {{"corpus", eb.corpus},
                                     {"measure", eb.measure},
                                     {"min_df", std::to_string(eb.min_df)},
                                     {"cap", std::to_string(eb.cap)},
                                     {"out", eb.out}});
            mlabel::AssocOptions opts;
            opts.measure = mlabel::parse_measure(eb.measure);
            opts.min_df = eb.min_df;
            opts.cap = eb.cap;
            const auto docs = mlabel::load_corpus(eb.corpus);
            const auto assoc = mlabel::AssociationIndex::build(docs, opts);
            assoc.save(eb.out);
            mlabel::log_info(std::to_string(assoc.n_concepts()) + " concepts, " +
                             std::to_string(assoc.n_terms()) + " eligible terms -> " + eb.out);
        } else if (cmd_esa_classify->parsed()) {
            require(*cmd_esa_classify, "--assoc", ec.assoc);
            require(*cmd_esa_classify, "--input", ec.input);
            require(*cmd_esa_classify, "--out", ec.out);
            require_file("assoc", ec.assoc);
            require_file("input", ec.input);
            std::size_t fixed_n = 0;
            if (ec.n != "gold") {
                try {
                    fixed_n = std::stoul(ec.n);
                } catch (const std::exception&) {
                    throw error("--n must be \"gold\" or a positive integer, got: " + ec.n);
                }
                if (fixed_n == 0) throw error("--n must be >= 1");
            }
            log_config("esa-classify",
                       {{"assoc", ec.assoc}, {"input", ec.input}, {"n", ec.n}, {"out", ec.out}});
            const auto assoc = mlabel::AssociationIndex::load(ec.assoc);
            const auto docs = mlabel::load_corpus(ec.input);
            std::vector<mlabel::Prediction> preds(docs.size());
            mlabel::parallel_for(docs.size(), ec.threads, [&](std::size_t i) {
                preds[i].id = docs[i].id;
                const std::size_t n = fixed_n > 0 ? fixed_n : docs[i].labels.size();
                if (n == 0) {
                    mlabel::log_warn("document \"" + docs[i].id +
                                     "\" has no gold labels; empty prediction under --n gold");
                    return;
                }
                try {
                    preds[i].ranked = assoc.classify(docs[i], n);
                } catch (const error&) {
                    return;
                }
                std::vector<std::string> labels;
                for (const auto& [l, s] : preds[i].ranked) labels.push_back(l);
                preds[i].labels = mlabel::make_label_set(std::move(labels));
            });
            mlabel::save_predictions(preds, ec.out);
            mlabel::log_info(std::to_string(preds.size()) + " predictions -> " + ec.out);
        } else if (cmd_bench->parsed()) {
            validate_ranges(bn.alpha, bn.tau, bn.k, false);
            log_config("bench", {{"suite", bn.suite},
                                 {"seed", std::to_string(bn.seed)},
                                 {"topics", std::to_string(bn.topics)},
                                 {"train_docs", std::to_string(bn.train_docs)},
                                 {"test_docs", std::to_string(bn.test_docs)},
                                 {"k", std::to_string(bn.k)},
                                 {"alpha", std::to_string(bn.alpha)},
                                 {"tau", std::to_string(bn.tau)},
                                 {"rf_trees", std::to_string(bn.rf_trees)},
                                 {"out", bn.out.empty() ? "(none)" : bn.out}});
            mlabel::BenchConfig cfg;
            cfg.synth.seed = bn.seed;
            cfg.synth.topics = bn.topics;
            cfg.synth.train_docs = bn.train_docs;
            cfg.synth.test_docs = bn.test_docs;
            cfg.synth.noise_vocab = bn.noise_vocab;
            cfg.k = bn.k;
            cfg.alpha = bn.alpha;
            cfg.tau = bn.tau;
            cfg.rf_trees = bn.rf_trees;
            cfg.threads = bn.threads;
            cfg.out_dir = bn.out;
            const auto result = mlabel::run_bench(cfg);
            std::cout << mlabel::bench_tables(result);
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const error& e) {
        std::cerr << "[mlabel] error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "[mlabel] error: " << e.what() << "\n";
        return 1;
    }
}
