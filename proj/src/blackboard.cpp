#include "cgpl/blackboard.hpp"

#include <algorithm>

namespace cgpl {

std::string to_string(const Fact& fact) {
  std::string out = std::string(to_string(fact.topic)) + " " + fact.producer + " " + fact.subject;
  char sep = ' ';
  for (const auto& [k, v] : fact.payload) {
    out += sep + k + "=" + v;
    sep = ',';
  }
  return out;
}

std::string ClaimConflict::message() const {
  return "artifact " + path + " claimed by " + claimant + " is already claimed by " + holder;
}

Blackboard::PublishResult Blackboard::publish(Fact fact) {
  for (const auto& f : facts_) {
    if (f.topic == fact.topic && f.producer == fact.producer && f.subject == fact.subject) {
      return f.payload == fact.payload ? PublishResult::Repeated : PublishResult::Conflict;
    }
  }
  facts_.push_back(std::move(fact));
  return PublishResult::Added;
}

std::vector<Fact> Blackboard::query(FactTopic topic,
                                    const std::optional<std::string>& subject) const {
  std::vector<Fact> out;
  for (const auto& f : facts_) {
    if (f.topic == topic && (!subject || f.subject == *subject)) out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<ClaimConflict> claim_artifact(Blackboard& board, const std::string& path,
                                            const std::string& component) {
  auto [it, inserted] = board.claims_.emplace(path, component);
  if (!inserted && it->second != component) {
    return ClaimConflict{path, it->second, component};
  }
  board.publish({FactTopic::ArtifactClaimed, component, path, {}});
  return std::nullopt;
}

BlackboardView::BlackboardView(Blackboard& board, const GeneratorComponent& component,
                               ValidationReport& sink)
    : board_(board), component_(component), sink_(sink) {}

bool BlackboardView::publish(FactTopic topic, std::string subject, Payload payload) {
  if (!component_.interface.produces.count(topic)) {
    sink_.add({"GEN-FACT-DISCIPLINE", {component_.id},
               component_.id + " published " + std::string(to_string(topic)) +
                   ", which its interface does not produce",
               {}});
    return false;
  }
  auto result = board_.publish({topic, component_.id, subject, std::move(payload)});
  if (result == Blackboard::PublishResult::Conflict) {
    sink_.add({"GEN-FACT-CONFLICT", {component_.id},
               component_.id + " republished " + std::string(to_string(topic)) + " for " +
                   subject + " with a different payload",
               {}});
    return false;
  }
  return true;
}

std::vector<Fact> BlackboardView::read(FactTopic topic, const std::optional<std::string>& subject) {
  if (!component_.interface.consumes.count(topic)) {
    sink_.add({"GEN-FACT-DISCIPLINE", {component_.id},
               component_.id + " read " + std::string(to_string(topic)) +
                   ", which its interface does not consume",
               {}});
    return {};
  }
  return board_.query(topic, subject);
}

}  // namespace cgpl
