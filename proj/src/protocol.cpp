#include "visemelab/protocol.hpp"

#include "visemelab/error.hpp"
#include "visemelab/params_json.hpp"
#include "visemelab/rng.hpp"

namespace visemelab {

const LabeledCorpus& Corpora::of(LanguageId lang) const {
  const auto& c = lang == LanguageId::kEnglish ? english : mandarin;
  if (!c) {
    throw ConfigError("protocol needs the " + std::string(language_name(lang)) + " corpus");
  }
  return *c;
}

namespace {

struct Phase {
  FeatureDataset train;
  FeatureDataset test;
  std::vector<double> weights;
};

AccuracyRow to_row(const PerVisemeAccuracy& acc) {
  AccuracyRow row(acc.size());
  for (std::size_t c = 0; c < acc.size(); ++c) {
    if (acc.present(c)) row[c] = acc.accuracy(c);
  }
  return row;
}

class Runner {
 public:
  Runner(const ProtocolSpec& protocol, const RunInputs& in)
      : protocol_(protocol),
        in_(in),
        seed_(in.training.seed),
        merged_(build_inventory(InventoryScope::Merged(), *in.tables)),
        inventory_(protocol.uses_merged_inventory()
                       ? merged_
                       : build_inventory(InventoryScope::Of(protocol.language), *in.tables)),
        model_(make_confusability_model(merged_, in.generator, seed_)) {
    in_.training.validate();
    in_.detection.validate();
    params_ = init_model(inventory_, in.generator.dim, seed_, in.training.init_scale);
    trace_.protocol = protocol;
    trace_.config = {{"training", in.training},
                     {"generator", in.generator},
                     {"detection", in.detection}};
    trace_.labels = inventory_.rendered_labels();
    trace_.inventory_hash = inventory_.hash();
  }

  LabeledCorpus train_split(LanguageId lang) const {
    return split_corpus(in_.corpora->of(lang), {protocol_.fraction, seed_});
  }

  FeatureDataset features(const LabeledCorpus& c) const {
    return generate_features(c, model_, inventory_, derive_seed({seed_, seed_tag("train")}));
  }

  FeatureDataset test_features(LanguageId lang) const {
    return generate_test_features(in_.corpora->of(lang), model_, inventory_, seed_,
                                  in_.generator.test_samples_per_word);
  }

  Phase make_phase(FeatureDataset train, FeatureDataset test) const {
    check_training_data(params_, train);
    auto w = class_weights(train, inventory_.size(), in_.training.class_balanced);
    return {std::move(train), std::move(test), std::move(w)};
  }

  // Trains and evaluates one epoch, appending it to the trace.
  const EpochRecord& step(const Phase& phase, int phase_marker) {
    ++epoch_;
    updates_ += train_epoch_inplace(params_, phase.train, in_.training, epoch_, phase.weights,
                                    updates_)
                    .updates;
    auto acc = evaluate(params_, phase.test);
    trace_.epochs.push_back({epoch_, phase_marker, acc.overall(), to_row(acc)});
    return trace_.epochs.back();
  }

  TrainingTrace run() {
    switch (protocol_.kind) {
      case ProtocolKind::kMonolingual: {
        Phase p = make_phase(features(train_split(protocol_.language)),
                             test_features(protocol_.language));
        for (int e = 0; e < in_.training.max_epochs; ++e) step(p, 1);
        break;
      }
      case ProtocolKind::kBilingual: {
        LabeledCorpus en = train_split(LanguageId::kEnglish);
        LabeledCorpus cmn = train_split(LanguageId::kMandarin);
        equalize_sample_counts(en, cmn);
        FeatureDataset train = features(en);
        train.append(features(cmn));
        FeatureDataset test = test_features(LanguageId::kEnglish);
        test.append(test_features(LanguageId::kMandarin));
        Phase p = make_phase(std::move(train), std::move(test));
        for (int e = 0; e < in_.training.max_epochs; ++e) step(p, 1);
        break;
      }
      case ProtocolKind::kSequential:
        run_sequential();
        break;
    }
    trace_.params_digest = params_.digest();
    return trace_;
  }

 private:
  void run_sequential() {
    const auto l1 = protocol_.language, l2 = protocol_.l2();
    const int limit = in_.training.max_epochs;
    const double eps = in_.training.convergence_eps;
    const int patience = in_.training.convergence_patience;
    {
      Phase p1 = make_phase(features(train_split(l1)), test_features(l1));
      CriticalPeriodStream stream(in_.detection);
      std::vector<double> overall;
      bool switched = false;
      for (int e = 0; e < limit && !switched; ++e) {
        const auto& rec = step(p1, 1);
        overall.push_back(rec.overall);
        if (protocol_.switch_rule == SwitchRule::kAtCriticalPeriod) {
          switched = stream.push(rec.accuracy).has_value();
        } else {
          switched = detect_convergence_online(overall, eps, patience);
        }
      }
      if (!switched && protocol_.switch_rule == SwitchRule::kAtCriticalPeriod) {
        trace_.params_digest = params_.digest();
        throw NoCriticalPeriodError(trace_);
      }
      trace_.switch_epoch = epoch_;
    }
    Phase p2 = make_phase(features(train_split(l2)), test_features(l2));
    std::vector<double> overall;
    for (int e = 0; e < limit; ++e) {
      overall.push_back(step(p2, 2).overall);
      if (detect_convergence_online(overall, eps, patience)) break;
    }
  }

  ProtocolSpec protocol_;
  RunInputs in_;
  std::uint64_t seed_;
  VisemeInventory merged_;
  VisemeInventory inventory_;
  ConfusabilityModel model_;
  ModelParams params_;
  TrainingTrace trace_;
  int epoch_ = 0;
  std::uint64_t updates_ = 0;
};

}  // namespace

TrainingTrace run_protocol(const ProtocolSpec& protocol, const RunInputs& inputs) {
  if (!inputs.corpora || !inputs.tables) throw ConfigError("run inputs are incomplete");
  return Runner(protocol, inputs).run();
}

}  // namespace visemelab
