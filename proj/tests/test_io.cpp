#include <gtest/gtest.h>

#include <sstream>

#include "permeable/commands.hpp"
#include "permeable/error.hpp"
#include "permeable/io.hpp"
#include "permeable/scene.hpp"

using namespace permeable;

namespace {

ErrorCode code_of(std::string_view text) {
  try {
    (void)parse_scene_config(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "scene was accepted: " << text;
  return ErrorCode::invalid_argument;
}

std::string message_of(std::string_view text) {
  try {
    (void)parse_scene_config(text);
  } catch (const Error& e) {
    return e.message();
  }
  return {};
}

constexpr std::string_view kSlitScene =
    R"({"dimension":2,"exception_set":{"kind":"slit","params":{"closed":true}},"points":[[-1,1],[-1,-1]]})";

}  // namespace

TEST(Scene, SlitExample) {
  const SceneConfig c = parse_scene_config(kSlitScene);
  EXPECT_EQ(c.dimension, 2U);
  ASSERT_TRUE(c.exception_set);
  EXPECT_EQ(c.exception_set->kind(), Kind::slit);
  ASSERT_EQ(c.points.size(), 2U);
  EXPECT_EQ(c.points[1], (Point{-1.0, -1.0}));
  EXPECT_EQ(c.params.depth, 10);
  EXPECT_EQ(c.format, OutputFormat::json);
}

TEST(Scene, ParamsAndOutput) {
  const SceneConfig c = parse_scene_config(
      R"({"params":{"depth":6,"eps":1e-4,"seed":9,"pairs":50,"metric":"l1"},"output":{"format":"csv","path":"x.csv"}})");
  EXPECT_EQ(c.params.depth, 6);
  EXPECT_DOUBLE_EQ(c.params.eps, 1e-4);
  EXPECT_EQ(c.params.seed, 9U);
  EXPECT_EQ(c.params.pairs, 50);
  EXPECT_EQ(c.params.metric, "l1");
  EXPECT_EQ(c.format, OutputFormat::csv);
  EXPECT_EQ(c.output_path, "x.csv");
}

TEST(Scene, UnknownKeysRejected) {
  EXPECT_EQ(code_of(R"({"dimension":2,"colour":"red"})"), ErrorCode::schema_violation);
  EXPECT_NE(message_of(R"({"dimension":2,"colour":"red"})").find("colour"), std::string::npos);
  EXPECT_EQ(code_of(R"({"params":{"depht":3}})"), ErrorCode::schema_violation);
}

TEST(Scene, UnknownKindAndDimension) {
  EXPECT_EQ(code_of(R"({"exception_set":{"kind":"torus","params":{}}})"), ErrorCode::unknown_kind);
  EXPECT_EQ(code_of(R"({"dimension":3,"exception_set":{"kind":"rational_grid","params":{}}})"),
            ErrorCode::dimension_mismatch);
  EXPECT_EQ(code_of(R"({"dimension":2,"points":[[0,0,1]]})"), ErrorCode::dimension_mismatch);
}

TEST(Scene, MalformedJsonReportsLine) {
  const std::string text = "{\n  \"dimension\": 2,,\n}";
  EXPECT_EQ(code_of(text), ErrorCode::schema_violation);
  EXPECT_NE(message_of(text).find("line 2"), std::string::npos) << message_of(text);
}

TEST(Scene, OutOfRangeParams) {
  EXPECT_EQ(code_of(R"({"params":{"depth":40}})"), ErrorCode::schema_violation);
  EXPECT_EQ(code_of(R"({"params":{"eps":-1}})"), ErrorCode::schema_violation);
}

TEST(Scene, DeclaredChartConstantChecked) {
  // identity scaled by 3 cannot be 1-Lipschitz
  const std::string bad =
      R"({"exception_set":{"kind":"chart_manifold","params":{"charts":[{"kind":"affine","matrix":[[3,0],[0,3]],"offset":[0,0],"manifold_dim":1,"lipschitz":1}]}}})";
  EXPECT_EQ(code_of(bad), ErrorCode::schema_violation);
}

TEST(Scene, CbSetDescriptors) {
  const SceneConfig c = parse_scene_config(R"({"cb_set":{"kind":"sk_family","k":3}})");
  ASSERT_TRUE(c.cb_set);
  EXPECT_EQ(cb_rank(*c.cb_set).rank, 4);
  const SceneConfig u = parse_scene_config(
      R"({"cb_set":{"kind":"union","parts":[{"kind":"points","values":[5,6]},{"kind":"perfect_core","start":0,"end":1}]}})");
  EXPECT_TRUE(cb_rank(*u.cb_set).perfect_core);
}

TEST(RequireFields, NamesTheMissingField) {
  const SceneConfig c = parse_scene_config(R"({"dimension":2,"points":[[0,0],[1,1]]})");
  try {
    require_scene_fields(Command::certify, c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema_violation);
    EXPECT_NE(e.message().find("exception_set"), std::string::npos);
  }
  EXPECT_NO_THROW(require_scene_fields(Command::verify, c));
}

TEST(Witness, JsonRoundTripKeepsCrossings) {
  const Polyline p{{-2.0, -1.0}, {-2.0, 1.0}, {1.0, 1.0}};
  const Polyline back = parse_polyline(to_json(p), "witness");
  EXPECT_EQ(back.vertices(), p.vertices());
  const ExceptionSet s = make_slit();
  const CrossingReport a = path_crossings(s, p), b = path_crossings(s, back);
  ASSERT_EQ(a.crossings.size(), b.crossings.size());
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_EQ(to_json(a)["classification"], "finite");
}

TEST(Witness, CsvHasVersionLineAndHeader) {
  const std::string csv = polyline_csv(Polyline{{0.0, 0.0}, {1.0, 2.0}});
  std::istringstream in(csv);
  std::string first, header;
  std::getline(in, first);
  std::getline(in, header);
  EXPECT_EQ(first.rfind(std::string(kCsvVersion), 0), 0U);
  EXPECT_EQ(header, "x1,x2");
}

TEST(Commands, DistOnSlitScene) {
  SceneConfig c = parse_scene_config(kSlitScene);
  c.format = OutputFormat::json;
  const CommandResult r = execute_command(Command::dist, c);
  ASSERT_EQ(r.exit_code, kExitOk) << r.error;
  const Json j = Json::parse(r.output);
  EXPECT_NEAR(j["upper"].get<double>(), 2.0 * std::sqrt(2.0), 0.01 * 2.0 * std::sqrt(2.0));
  EXPECT_FALSE(j["infinite"].get<bool>());
  EXPECT_TRUE(j.contains("witness"));
}

TEST(Commands, CbRankText) {
  SceneConfig c = parse_scene_config(R"({"cb_set":{"kind":"sk_family","k":3}})");
  c.format = OutputFormat::text;
  const CommandResult r = execute_command(Command::cb_rank, c);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.output, "4\n");
}

TEST(Commands, ModuleErrorIsStructured) {
  SceneConfig c = parse_scene_config(
      R"({"dimension":2,"exception_set":{"kind":"irrational_square","params":{}},"points":[[0.3,0.4],[0.6,0.7]]})");
  const CommandResult r = execute_command(Command::certify, c);
  EXPECT_EQ(r.exit_code, kExitFailure);
  const Json e = Json::parse(r.error);
  EXPECT_EQ(e["error"], "not_permeable_family");
  EXPECT_EQ(e["command"], "certify");
  EXPECT_TRUE(r.output.empty());
}

TEST(Commands, NamesRoundTrip) {
  for (Command c : {Command::dist, Command::theta_dist, Command::certify, Command::cb_rank, Command::staircase,
                    Command::lipschitz, Command::verify})
    EXPECT_EQ(parse_command(to_string(c)), c);
  EXPECT_FALSE(parse_command("walk"));
}
