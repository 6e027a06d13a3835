// pmcast: compile patterns, train stream models, forecast pattern
// completion and score the forecasts. Every stage reads and writes files so
// the stages compose from shell scripts.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pmcast/automaton.hpp"
#include "pmcast/engine.hpp"
#include "pmcast/error.hpp"
#include "pmcast/evaluation.hpp"
#include "pmcast/event_model.hpp"
#include "pmcast/forecasting.hpp"
#include "pmcast/markov.hpp"
#include "pmcast/pattern.hpp"
#include "pmcast/simulator.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitDomain = 2;

struct PatternSource {
    std::string text;
    std::string file;
    std::string dfa;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw pmcast::IoError("cannot open " + path + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw pmcast::IoError("cannot open " + path + " for writing");
    return out;
}

void close_out(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw pmcast::IoError("failed writing " + path);
}

pmcast::Dfa load_dfa(const PatternSource& src, const pmcast::Alphabet& alphabet) {
    if (!src.dfa.empty()) {
        auto dfa = pmcast::read_dfa(src.dfa);
        if (!(dfa.alphabet() == alphabet))
            throw pmcast::DomainError("DFA alphabet [" + dfa.alphabet().join() +
                                      "] does not match the model alphabet [" + alphabet.join() + "]");
        return dfa;
    }
    std::string text = src.text;
    if (!src.file.empty()) text = slurp(src.file);
    if (text.empty()) throw pmcast::DomainError("no pattern given (use --pattern, --pattern-file or --dfa)");
    return pmcast::compile(pmcast::parse_pattern(text, alphabet), alphabet);
}

void add_pattern_options(CLI::App* cmd, PatternSource& src, bool allow_dfa) {
    auto* p = cmd->add_option("-p,--pattern", src.text, "Pattern text, e.g. \"a;b;b;b\"");
    auto* f = cmd->add_option("--pattern-file", src.file, "File holding the pattern text");
    p->excludes(f);
    if (allow_dfa) {
        auto* d = cmd->add_option("-d,--dfa", src.dfa, "Compiled DFA JSON (from 'compile')");
        d->excludes(p)->excludes(f);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pattern forecasting over event streams: compile, train, forecast, evaluate"};
    app.require_subcommand(1);

    // compile
    PatternSource compile_src;
    std::string compile_alphabet, compile_out;
    auto* compile = app.add_subcommand("compile", "Compile a pattern to its streaming DFA (JSON)");
    add_pattern_options(compile, compile_src, false);
    compile->add_option("-A,--alphabet", compile_alphabet, "Comma separated event types, e.g. a,b")->required();
    compile->add_option("-o,--out", compile_out, "Output DFA JSON")->required();

    // train
    std::string train_in, train_out, train_alphabet;
    std::size_t train_order = 1;
    double train_smoothing = 1.0;
    auto* train = app.add_subcommand("train", "Estimate an order-m symbol model from a stream");
    train->add_option("-i,--input", train_in, "Training stream (CSV or JSON-lines)")->required();
    train->add_option("-m,--order", train_order, "Markov order m")->capture_default_str();
    train->add_option("-s,--smoothing", train_smoothing, "Additive smoothing alpha")->default_str("1.0");
    train->add_option("-A,--alphabet", train_alphabet, "Explicit alphabet (default: inferred, sorted)");
    train->add_option("-o,--out", train_out, "Output model JSON")->required();

    // forecast
    PatternSource fc_src;
    std::string fc_model, fc_in, fc_out;
    double fc_theta = 0.0;
    std::size_t fc_horizon = pmcast::kDefaultHorizon;
    auto* forecast = app.add_subcommand("forecast", "Detect matches and emit forecast intervals");
    add_pattern_options(forecast, fc_src, true);
    forecast->add_option("-M,--model", fc_model, "Model JSON (from 'train')")->required();
    forecast->add_option("-t,--theta", fc_theta, "Confidence threshold in (0,1]")->required();
    forecast->add_option("-H,--horizon", fc_horizon, "Waiting-time horizon h")->capture_default_str();
    forecast->add_option("-i,--input", fc_in, "Stream to run (CSV or JSON-lines)")->required();
    forecast->add_option("-o,--out", fc_out, "Output records (JSON-lines)")->required();

    // evaluate
    std::string ev_in, ev_out;
    auto* evaluate = app.add_subcommand("evaluate", "Per-state precision, spread and distance");
    evaluate->add_option("-i,--input", ev_in, "Forecast records (JSON-lines)")->required();
    evaluate->add_option("-o,--out", ev_out, "Output metrics CSV")->required();

    // wtd
    PatternSource wtd_src;
    std::string wtd_model, wtd_out;
    std::size_t wtd_horizon = pmcast::kDefaultHorizon;
    auto* wtd = app.add_subcommand("wtd", "Waiting-time distributions per non-final state (CSV)");
    add_pattern_options(wtd, wtd_src, true);
    wtd->add_option("-M,--model", wtd_model, "Model JSON (from 'train')")->required();
    wtd->add_option("-H,--horizon", wtd_horizon, "Waiting-time horizon h")->capture_default_str();
    wtd->add_option("-o,--out", wtd_out, "Output CSV")->required();

    // simulate
    std::string sim_model, sim_out, sim_context;
    std::size_t sim_length = 0;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic stream from a model");
    simulate->add_option("-M,--model", sim_model, "Model JSON")->required();
    simulate->add_option("-n,--length", sim_length, "Number of events")->required();
    simulate->add_option("--seed", sim_seed, "mt19937_64 seed")->capture_default_str();
    simulate->add_option("--initial-context", sim_context,
                         "Comma separated m symbols, oldest first (default: uniform draw)");
    simulate->add_option("-o,--out", sim_out, "Output stream CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitDomain;
    }

    try {
        if (*compile) {
            const auto alphabet = pmcast::Alphabet::parse(compile_alphabet);
            const auto dfa = load_dfa(compile_src, alphabet);
            pmcast::write_dfa(dfa, compile_out);
            std::cout << "states=" << dfa.num_states() << " finals=" << dfa.finals().size() << '\n';
        } else if (*train) {
            std::optional<pmcast::Alphabet> alphabet;
            if (!train_alphabet.empty()) alphabet = pmcast::Alphabet::parse(train_alphabet);
            const auto stream = pmcast::read_stream(train_in, alphabet);
            const auto model = pmcast::train(stream, train_order, train_smoothing);
            pmcast::write_model(model, train_out);
            std::cout << "events=" << stream.size() << " contexts=" << model.contexts().count() << '\n';
        } else if (*forecast) {
            pmcast::check_theta(fc_theta);
            if (fc_horizon == 0) throw pmcast::DomainError("horizon must be >= 1");
            const auto model = pmcast::read_model(fc_model);
            const auto dfa = load_dfa(fc_src, model.alphabet());
            const auto stream = pmcast::read_stream(fc_in, model.alphabet());
            const auto pmc = pmcast::build_pmc(dfa, model);
            const auto wtt = pmcast::waiting_times(pmc, fc_horizon);
            const auto result = pmcast::run(stream, dfa, pmc, wtt, fc_theta);

            auto out = open_out(fc_out);
            pmcast::write_records(result, out);
            close_out(out, fc_out);

            std::size_t hits = 0, misses = 0, unresolved = 0;
            for (const auto& f : result.forecasts) {
                hits += f.outcome == pmcast::Outcome::Hit;
                misses += f.outcome == pmcast::Outcome::Miss;
                unresolved += f.outcome == pmcast::Outcome::Unresolved;
            }
            std::cout << "matches=" << result.matches.size() << " forecasts=" << result.forecasts.size()
                      << " hits=" << hits << " misses=" << misses << " unresolved=" << unresolved
                      << " hit_rate=";
            if (hits + misses > 0)
                std::cout << static_cast<double>(hits) / static_cast<double>(hits + misses);
            else
                std::cout << "n/a";
            std::cout << '\n';

            if (!result.insufficient.empty()) {
                for (const auto& s : result.insufficient)
                    std::cerr << "error: horizon insufficient for state " << pmc.label(s.state)
                              << ": achievable mass " << s.achievable << " < theta " << fc_theta << '\n';
                return kExitDomain;
            }
        } else if (*evaluate) {
            std::ifstream in(ev_in, std::ios::binary);
            if (!in) throw pmcast::IoError("cannot open " + ev_in + " for reading");
            const auto records = pmcast::read_forecast_records(in);
            pmcast::export_metrics(pmcast::evaluate(records), ev_out);
        } else if (*wtd) {
            if (wtd_horizon == 0) throw pmcast::DomainError("horizon must be >= 1");
            const auto model = pmcast::read_model(wtd_model);
            const auto dfa = load_dfa(wtd_src, model.alphabet());
            const auto pmc = pmcast::build_pmc(dfa, model);
            const auto table = pmcast::waiting_times(pmc, wtd_horizon);
            auto out = open_out(wtd_out);
            pmcast::write_wtd_csv(table, out);
            close_out(out, wtd_out);
        } else if (*simulate) {
            if (sim_length == 0) throw pmcast::DomainError("length must be >= 1");
            auto model = pmcast::read_model(sim_model);
            pmcast::GeneratorSpec spec{model, sim_length, sim_seed, std::nullopt};
            if (!sim_context.empty()) {
                const auto& codec = model.contexts();
                spec.initial_context = codec.decode(codec.parse(sim_context, model.alphabet()));
            }
            pmcast::write_stream(pmcast::generate(spec), std::filesystem::path(sim_out));
        }
    } catch (const pmcast::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const pmcast::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}
