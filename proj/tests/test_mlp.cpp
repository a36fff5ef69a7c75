#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "levershap/checkpoint.hpp"
#include "levershap/error.hpp"
#include "levershap/optim.hpp"
#include "test_util.hpp"

using namespace levershap;
using namespace levershap::test;

TEST_CASE("init produces the actor and critic shapes") {
  Mlp actor({20, 256, 256, 256, 4}, Activation::kRelu, Activation::kTanh, 1);
  CHECK(actor.input_size() == 20);
  CHECK(actor.output_size() == 4);
  CHECK(actor.layer_count() == 4);
  CHECK(actor.weights()[0].rows() == 256);
  CHECK(actor.weights()[0].cols() == 20);
  CHECK(actor.weights()[3].rows() == 4);
  for (const auto& b : actor.biases()) CHECK(b.isZero(0.0));

  Mlp critic({24, 256, 256, 256, 1}, Activation::kRelu, Activation::kLinear, 1);
  CHECK(critic.input_size() == 24);
  CHECK(critic.output_size() == 1);
}

TEST_CASE("init is deterministic for a fixed seed") {
  Mlp a({2, 2}, Activation::kRelu, Activation::kLinear, 99);
  Mlp b({2, 2}, Activation::kRelu, Activation::kLinear, 99);
  CHECK(a.weights()[0] == b.weights()[0]);
  Mlp c({2, 2}, Activation::kRelu, Activation::kLinear, 100);
  CHECK(a.weights()[0] != c.weights()[0]);
}

TEST_CASE("init rejects bad architectures") {
  CHECK_THROWS_AS(Mlp({5}, Activation::kRelu, Activation::kLinear, 1),
                  InvalidArgumentError);
  CHECK_THROWS_AS(Mlp({}, Activation::kRelu, Activation::kLinear, 1),
                  InvalidArgumentError);
  CHECK_THROWS_AS(Mlp({4, 0, 2}, Activation::kRelu, Activation::kLinear, 1),
                  InvalidArgumentError);
  CHECK_THROWS_AS(Mlp({4, -3}, Activation::kRelu, Activation::kLinear, 1),
                  InvalidArgumentError);
}

TEST_CASE("zero parameters and tanh output give the zero vector") {
  Mlp mlp({3, 4, 2}, Activation::kRelu, Activation::kTanh, 1);
  for (auto& w : mlp.weights()) w.setZero();
  Rng rng(5);
  const Eigen::VectorXd out = mlp.forward(random_vector(rng, 3));
  CHECK(out.isZero(0.0));
}

TEST_CASE("identity single-layer linear net reproduces its input") {
  Mlp mlp({3, 3}, Activation::kRelu, Activation::kLinear, 1);
  mlp.weights()[0] = Eigen::MatrixXd::Identity(3, 3);
  mlp.biases()[0].setZero();
  Eigen::VectorXd x(3);
  x << 0.5, -2.0, 3.25;
  CHECK(mlp.forward(x) == x);
}

TEST_CASE("random nets stay finite on bounded inputs") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    Mlp mlp = random_mlp(rng, 4, 3, 2, 6,
                         Activation::kRelu,
                         i % 2 ? Activation::kTanh : Activation::kLinear);
    const Eigen::VectorXd out = mlp.forward(random_vector(rng, 4));
    CHECK(out.allFinite());
  }
}

TEST_CASE("tanh output is strictly inside (-1, 1)") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    Mlp mlp = random_mlp(rng, 3, 4, 2, 8, Activation::kRelu, Activation::kTanh);
    for (auto& w : mlp.weights()) w *= 40.0;  // saturate hard
    const Eigen::VectorXd out = mlp.forward(random_vector(rng, 3));
    for (int k = 0; k < 4; ++k) {
      CHECK(out(k) > -1.0);
      CHECK(out(k) < 1.0);
    }
  }
}

TEST_CASE("forward rejects mismatched input width") {
  Mlp mlp({3, 2}, Activation::kRelu, Activation::kLinear, 1);
  Eigen::VectorXd x(4);
  x.setZero();
  CHECK_THROWS_AS(mlp.forward(x), ShapeError);
}

TEST_CASE("zero output gradient yields zero parameter gradients") {
  Rng rng(17);
  Mlp mlp = random_mlp(rng, 4, 2, 2, 5);
  ForwardCache cache;
  mlp.forward(random_vector(rng, 4), &cache);
  const ParamGrads grads =
      mlp.backward(cache, Eigen::MatrixXd::Zero(2, 1));
  for (const auto& w : grads.weights) CHECK(w.isZero(0.0));
  for (const auto& b : grads.biases) CHECK(b.isZero(0.0));
}

TEST_CASE("single affine layer: dW equals g x^T") {
  Rng rng(19);
  Mlp mlp = random_mlp(rng, 3, 2, 0, 0);
  const Eigen::VectorXd x = random_vector(rng, 3);
  const Eigen::VectorXd g = random_vector(rng, 2);
  ForwardCache cache;
  mlp.forward(x, &cache);
  const ParamGrads grads = mlp.backward(cache, g);
  const Eigen::MatrixXd expected = g * x.transpose();
  CHECK((grads.weights[0] - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((grads.biases[0] - g).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("gradients match central finite differences on random small nets") {
  Rng rng(23);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const int input = 2 + static_cast<int>(rng.uniform_index(4));
    const int output = 1 + static_cast<int>(rng.uniform_index(3));
    const int depth = static_cast<int>(rng.uniform_index(3));
    const int width = 2 + static_cast<int>(rng.uniform_index(7));
    const Activation out_act =
        i % 3 == 0 ? Activation::kTanh : Activation::kLinear;
    Mlp mlp = random_mlp(rng, input, output, depth, width, Activation::kRelu,
                         out_act);
    const auto result = check_gradients_fd(
        std::move(mlp), random_vector(rng, input), random_vector(rng, output));
    worst = std::max(worst, result.max_rel_err);
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("backward rejects a cache from a different network") {
  Rng rng(29);
  Mlp a = random_mlp(rng, 3, 2, 1, 4);
  Mlp b = random_mlp(rng, 3, 2, 2, 4);
  ForwardCache cache;
  a.forward(random_vector(rng, 3), &cache);
  CHECK_THROWS_AS(b.backward(cache, Eigen::MatrixXd::Zero(2, 1)), ShapeError);
}

TEST_CASE("adam: zero gradients leave parameters and moments unchanged") {
  Rng rng(31);
  Mlp mlp = random_mlp(rng, 2, 1, 1, 3);
  const auto before = mlp.weights();
  AdamState state = AdamState::for_mlp(mlp);
  ParamGrads zeros;
  for (const auto& w : mlp.weights())
    zeros.weights.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
  for (const auto& b : mlp.biases())
    zeros.biases.push_back(Eigen::VectorXd::Zero(b.size()));
  adam_step(mlp, zeros, state, 0.001);
  CHECK(state.step_count == 1);
  for (std::size_t l = 0; l < before.size(); ++l) {
    CHECK(mlp.weights()[l] == before[l]);
    CHECK(state.weight_m[l].isZero(0.0));
    CHECK(state.weight_v[l].isZero(0.0));
  }
}

TEST_CASE("adam: bias-corrected first step moves by about lr") {
  Mlp mlp({1, 1}, Activation::kRelu, Activation::kLinear, 1);
  mlp.weights()[0](0, 0) = 1.0;
  AdamState state = AdamState::for_mlp(mlp);
  ParamGrads grads;
  grads.weights.push_back(Eigen::MatrixXd::Constant(1, 1, 1.0));
  grads.biases.push_back(Eigen::VectorXd::Zero(1));
  adam_step(mlp, grads, state, 0.001);
  CHECK(mlp.weights()[0](0, 0) == doctest::Approx(0.999).epsilon(1e-6));
}

TEST_CASE("adam: zero learning rate changes nothing") {
  Rng rng(37);
  Mlp mlp = random_mlp(rng, 2, 2, 1, 3);
  const auto before = mlp.weights();
  AdamState state = AdamState::for_mlp(mlp);
  ForwardCache cache;
  mlp.forward(random_vector(rng, 2), &cache);
  const ParamGrads grads = mlp.backward(cache, random_vector(rng, 2));
  adam_step(mlp, grads, state, 0.0);
  for (std::size_t l = 0; l < before.size(); ++l)
    CHECK(mlp.weights()[l] == before[l]);
}

TEST_CASE("adam refuses non-finite gradients") {
  Rng rng(41);
  Mlp mlp = random_mlp(rng, 2, 1, 0, 0);
  AdamState state = AdamState::for_mlp(mlp);
  ParamGrads grads;
  grads.weights.push_back(Eigen::MatrixXd::Constant(1, 2, 0.0));
  grads.weights[0](0, 0) = std::nan("");
  grads.biases.push_back(Eigen::VectorXd::Zero(1));
  const auto before = mlp.weights()[0];
  CHECK_THROWS_AS(adam_step(mlp, grads, state, 0.001), PoisonedUpdateError);
  CHECK(mlp.weights()[0] == before);
  CHECK(state.step_count == 0);
}

TEST_CASE("polyak retain 0 copies, retain 1 freezes") {
  Rng rng(43);
  Mlp target = random_mlp(rng, 2, 2, 1, 3);
  Mlp source = random_mlp(rng, 2, 2, 1, 3);
  Mlp frozen = target;

  polyak_update(frozen, source, 1.0);
  for (std::size_t l = 0; l < target.weights().size(); ++l)
    CHECK(frozen.weights()[l] == target.weights()[l]);

  polyak_update(target, source, 0.0);
  for (std::size_t l = 0; l < target.weights().size(); ++l)
    CHECK(target.weights()[l] == source.weights()[l]);
}

TEST_CASE("polyak scalar mix: 0.95 retain of 0 toward 1 gives 0.05") {
  Mlp target({1, 1}, Activation::kRelu, Activation::kLinear, 1);
  Mlp source({1, 1}, Activation::kRelu, Activation::kLinear, 1);
  target.weights()[0](0, 0) = 0.0;
  source.weights()[0](0, 0) = 1.0;
  polyak_update(target, source, 0.95);
  CHECK(target.weights()[0](0, 0) == doctest::Approx(0.05));
}

TEST_CASE("polyak is a no-op at the fixed point target == source") {
  Rng rng(47);
  Mlp source = random_mlp(rng, 3, 2, 2, 4);
  Mlp target = source;
  for (const double retain : {0.0, 0.3, 0.95, 1.0}) {
    polyak_update(target, source, retain);
    for (std::size_t l = 0; l < target.weights().size(); ++l)
      CHECK((target.weights()[l] - source.weights()[l]).cwiseAbs().maxCoeff() <
            1e-15);
  }
}

TEST_CASE("polyak rejects mismatched architectures") {
  Rng rng(53);
  Mlp a = random_mlp(rng, 2, 2, 1, 3);
  Mlp b = random_mlp(rng, 2, 2, 1, 4);
  CHECK_THROWS_AS(polyak_update(a, b, 0.5), ShapeError);
}

TEST_CASE("checkpoint round trip preserves forward outputs bit for bit") {
  Rng rng(59);
  Mlp actor({20, 256, 256, 256, 4}, Activation::kRelu, Activation::kTanh,
            rng.next_u64());
  const Mlp restored = mlp_from_json(mlp_to_json(actor));
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = random_vector(rng, 20, -2.0, 2.0);
    const Eigen::VectorXd a = actor.forward(x);
    const Eigen::VectorXd b = restored.forward(x);
    CHECK(a == b);
  }
}

TEST_CASE("checkpoint load errors") {
  Rng rng(61);
  Mlp mlp = random_mlp(rng, 3, 2, 1, 4);
  const std::string text = mlp_to_json(mlp);

  CHECK_THROWS_AS(mlp_from_json(""), LoadError);
  CHECK_THROWS_AS(mlp_from_json(text.substr(0, text.size() / 2)), LoadError);

  std::string wrong_version = text;
  const auto pos = wrong_version.find("\"format_version\":1");
  REQUIRE(pos != std::string::npos);
  wrong_version.replace(pos, 18, "\"format_version\":9");
  CHECK_THROWS_AS(mlp_from_json(wrong_version), LoadError);

  const auto tmp = std::filesystem::temp_directory_path() / "levershap_mlp.json";
  save_mlp(mlp, tmp);
  const Mlp loaded = load_mlp(tmp);
  CHECK(loaded.weights()[0] == mlp.weights()[0]);
  std::filesystem::remove(tmp);
  CHECK_THROWS_AS(load_mlp(tmp), LoadError);
}
