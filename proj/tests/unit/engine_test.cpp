#include <doctest.h>

#include <algorithm>
#include <random>

#include "cgpl/artifact.hpp"
#include "cgpl/blackboard.hpp"
#include "cgpl/gen_cache.hpp"
#include "cgpl/ootl_syntax.hpp"
#include "support.hpp"

using namespace cgpl;

namespace {

GeneratorComponent component_with(std::set<FactTopic> produces, std::set<FactTopic> consumes) {
  GeneratorComponent c;
  c.id = "Probe";
  c.version = "1";
  c.interface.produces = std::move(produces);
  c.interface.consumes = std::move(consumes);
  return c;
}

const char* const kPerson =
    "package shop;\n"
    "class Person {\n"
    "  string name;\n"
    "  Person() {\n"
    "  }\n"
    "  string getName() {\n"
    "    return name;\n"
    "  }\n"
    "  void setName(string v) {\n"
    "    name = v;\n"
    "  }\n"
    "}\n";

}  // namespace

TEST_SUITE("blackboard") {
  TEST_CASE("claims are first-writer-wins and idempotent") {
    Blackboard board;
    CHECK_FALSE(claim_artifact(board, "Person.oo", "Types"));
    CHECK_FALSE(claim_artifact(board, "Person.oo", "Types"));
    CHECK(board.query(FactTopic::ArtifactClaimed).size() == 1);
    auto conflict = claim_artifact(board, "Person.oo", "Intruder");
    REQUIRE(conflict);
    CHECK(conflict->holder == "Types");
    CHECK(conflict->claimant == "Intruder");
    CHECK(conflict->message().find("Types") != std::string::npos);
    CHECK(conflict->message().find("Intruder") != std::string::npos);
    CHECK(board.claims().at("Person.oo") == "Types");
  }

  TEST_CASE("publishing is append-only with conflict detection") {
    Blackboard board;
    Fact f{FactTopic::TypeGenerated, "Types", "Person", {{"kind", "class"}}};
    CHECK(board.publish(f) == Blackboard::PublishResult::Added);
    CHECK(board.publish(f) == Blackboard::PublishResult::Repeated);
    Fact g = f;
    g.payload["kind"] = "enum";
    CHECK(board.publish(g) == Blackboard::PublishResult::Conflict);
    REQUIRE(board.facts().size() == 1);
    CHECK(board.facts()[0] == f);
    CHECK(board.query(FactTopic::TypeGenerated, "Order").empty());
  }

  TEST_CASE("views enforce the component's fact interface") {
    Blackboard board;
    ValidationReport sink;
    GeneratorComponent probe = component_with({FactTopic::TypeGenerated}, {FactTopic::HookProvided});
    BlackboardView view(board, probe, sink);
    CHECK(view.publish(FactTopic::TypeGenerated, "A"));
    CHECK(sink.valid());
    CHECK_FALSE(view.publish(FactTopic::MethodGenerated, "A"));
    CHECK(view.read(FactTopic::TypeGenerated).empty());
    REQUIRE(sink.violations.size() == 2);
    CHECK(sink.violations[0].code == "GEN-FACT-DISCIPLINE");
    CHECK(sink.violations[0].subjects.front() == "Probe");
    CHECK(board.facts().size() == 1);
  }

  TEST_CASE("property: query results do not depend on publication order") {
    std::vector<Fact> facts;
    for (const char* subject : {"A", "B", "C", "D"}) {
      for (const char* producer : {"X", "Y"}) {
        facts.push_back({FactTopic::TypeGenerated, producer, subject, {{"n", subject}}});
        facts.push_back({FactTopic::MethodGenerated, producer, subject, {}});
      }
    }
    Blackboard reference;
    for (const auto& f : facts) reference.publish(f);
    std::mt19937 rng(11);
    for (int round = 0; round < 25; ++round) {
      std::shuffle(facts.begin(), facts.end(), rng);
      Blackboard board;
      for (const auto& f : facts) board.publish(f);
      CHECK(board.query(FactTopic::TypeGenerated) == reference.query(FactTopic::TypeGenerated));
      CHECK(board.query(FactTopic::MethodGenerated, "C") ==
            reference.query(FactTopic::MethodGenerated, "C"));
    }
  }
}

TEST_SUITE("artifact") {
  TEST_CASE("regions merge only when tags agree") {
    ArtifactContainer c("A.oo");
    c.append("a\n", {"Class"}, "Types");
    c.append("b\nc\n", {"Class"}, "Types");
    c.append("d\n", {"Class", "Interface"}, "Types");
    c.append("e\n", {"Class"}, "Builder");
    REQUIRE(c.regions().size() == 3);
    CHECK(c.regions()[0].lines() == LineRange{1, 3});
    CHECK(c.regions()[1].lines() == LineRange{4, 4});
    CHECK(c.regions()[2].lines() == LineRange{5, 5});
    CHECK(c.content() == "a\nb\nc\nd\ne\n");
    CHECK(c.line_count() == 5);
  }

  TEST_CASE("appends must be whole lines with features") {
    ArtifactContainer c("A.oo");
    CHECK_THROWS_AS(c.append("partial", {"Class"}, "Types"), std::invalid_argument);
    CHECK_THROWS_AS(c.append("", {"Class"}, "Types"), std::invalid_argument);
    CHECK_THROWS_AS(c.append("x\n", {}, "Types"), std::invalid_argument);
  }

  TEST_CASE("trace round trip and queries") {
    ArtifactContainer a("Person.oo");
    a.append("l1\nl2\n", {"Class"}, "Types");
    a.append("l3\n", {"DefaultConstructor"}, "Types");
    ArtifactContainer b("PersonBuilder.oo");
    b.append("x\n", {"Builder"}, "Builder");
    TraceIndex t;
    t.add(a);
    t.add(b);
    const std::string text = t.serialize();
    CHECK(text ==
          "Person.oo:1-2 Types Class\n"
          "Person.oo:3-3 Types DefaultConstructor\n"
          "PersonBuilder.oo:1-1 Builder Builder\n");
    CHECK(TraceIndex::parse(text) == t);

    FeatureTrace dc = trace_feature(t, "DefaultConstructor");
    CHECK(dc.known);
    CHECK(dc.locations == std::vector<TraceLocation>{{"Person.oo", {3, 3}}});
    CHECK_FALSE(trace_feature(t, "Factory").known);
    ArtifactTrace pa = trace_artifact(t, "Person.oo");
    CHECK(pa.known);
    CHECK(pa.regions.size() == 2);
    CHECK_FALSE(trace_artifact(t, "Nope.oo").known);
  }

  TEST_CASE("malformed trace lines") {
    CHECK_THROWS_AS(TraceIndex::parse("Person.oo 1-2 Types Class\n"), ParseError);
    CHECK_THROWS_AS(TraceIndex::parse("Person.oo:3-1 Types Class\n"), ParseError);
    CHECK_THROWS_AS(TraceIndex::parse("Person.oo:0-1 Types Class\n"), ParseError);
    CHECK_THROWS_AS(TraceIndex::parse("Person.oo:1-1 Types\n"), ParseError);
    CHECK(TraceIndex::parse("") == TraceIndex{});
  }
}

TEST_SUITE("ootl_syntax") {
  TEST_CASE("a well-formed class") { CHECK(check_ootl_syntax(kPerson).valid()); }

  TEST_CASE("interfaces and enums") {
    CHECK(check_ootl_syntax("package p;\ninterface Named {\n  string name();\n}\n").valid());
    CHECK(check_ootl_syntax("package p;\nenum Diet {\n  MEAT,\n  PLANTS\n}\n").valid());
    CHECK(check_ootl_syntax(
              "package p;\nclass F {\n  P make() {\n    P x = new P();\n    x.init(this, y);\n"
              "    return x;\n  }\n}\n")
              .valid());
  }

  TEST_CASE("an unbalanced brace fails at end of input") {
    // Person without its closing brace, followed by an open method body.
    const std::string person = kPerson;
    const std::string broken = person.substr(0, person.size() - 2) + "  int broken() {\n";
    SyntaxStatus s = check_ootl_syntax(broken);
    CHECK(s.kind == SyntaxStatus::Kind::Invalid);
    CHECK(s.where == SourceLocation{13, 1});
  }

  TEST_CASE("stray characters are located") {
    SyntaxStatus s = check_ootl_syntax("package p;\nclass A {\n  int @@x;\n}\n");
    CHECK(s.kind == SyntaxStatus::Kind::Invalid);
    CHECK(s.where == SourceLocation{3, 7});
    SyntaxStatus c = check_ootl_syntax("package p;\n// note\nclass A {\n}\n");
    CHECK(c.kind == SyntaxStatus::Kind::Invalid);
    CHECK(c.where.line == 2);
  }

  TEST_CASE("missing package and trailing content") {
    CHECK_FALSE(check_ootl_syntax("class A {\n}\n").valid());
    CHECK_FALSE(check_ootl_syntax("package p;\nclass A {\n}\nclass B {\n}\n").valid());
    CHECK_FALSE(check_ootl_syntax("package p;\nclass class {\n}\n").valid());
  }

  TEST_CASE("validate_syntax stores the status") {
    ArtifactContainer c("Person.oo");
    c.append(kPerson, {"Class"}, "Types");
    CHECK(c.syntax_status().kind == SyntaxStatus::Kind::Unchecked);
    CHECK(validate_syntax(c).valid());
    CHECK(c.syntax_status().valid());
  }
}

TEST_SUITE("gen_cache") {
  TEST_CASE("sha256 reference vectors") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("serialize, parse and damaged lines") {
    GenCache c;
    c.entries["Person.oo"] = {sha256_hex("k"), sha256_hex("c")};
    c.entries["Order.oo"] = {sha256_hex("k2"), sha256_hex("c2")};
    CHECK(GenCache::parse(c.serialize()) == c);
    std::string damaged = c.serialize() + "Broken.oo onlyone\nX.oo zz " + sha256_hex("q") + "\n";
    CHECK(GenCache::parse(damaged) == c);
  }

  TEST_CASE("save and load") {
    testing::TempDir dir;
    GenCache c;
    c.entries["A.oo"] = {sha256_hex("1"), sha256_hex("2")};
    c.save(dir.path());
    CHECK(GenCache::load(dir.path()) == c);
    CHECK(GenCache::load(dir.path() / "missing").entries.empty());
  }

  TEST_CASE("key digests cover every input and ignore fact order") {
    CacheKeyInput base;
    base.artifact = "Person.oo";
    base.component_id = "Types";
    base.component_version = "1.0";
    base.options = {{"Types.default_constructor", true}};
    base.variation_points = {{"Types.extra_members", ""}};
    base.input_text = "class Person { }";
    base.consumed_facts = {{FactTopic::TypeGenerated, "Types", "A", {}},
                           {FactTopic::TypeGenerated, "Types", "B", {}}};
    const std::string key = compute_key_digest(base);
    CHECK(key.size() == 64);
    CHECK(compute_key_digest(base) == key);

    CacheKeyInput swapped = base;
    std::reverse(swapped.consumed_facts.begin(), swapped.consumed_facts.end());
    CHECK(compute_key_digest(swapped) == key);

    std::vector<CacheKeyInput> variants(8, base);
    variants[0].artifact = "Order.oo";
    variants[1].component_id = "Builder";
    variants[2].component_version = "1.1";
    variants[3].mode = BindingMode::RunTime;
    variants[4].options["Types.default_constructor"] = false;
    variants[5].variation_points["Types.extra_members"] = "  int x;\n";
    variants[6].input_text = "class Person { x: int; }";
    variants[7].consumed_facts.pop_back();
    std::set<std::string> seen{key};
    for (const auto& v : variants) CHECK(seen.insert(compute_key_digest(v)).second);
  }
}
