#include "translin/presets.hpp"

#include "translin/config.hpp"

namespace translin {
namespace {

std::string fig1a_config(double sigma1, double norm_q1, const std::string& method) {
  return std::string() +
         "# Model error against p1; ||q2|| = ||w1|| = 1, w1 = w2,\n"
         "# s = s1 = s2 = 5, n1 = 100, n2 = 50, 100 runs per point.\n"
         "[ground_truth]\n"
         "s = 5\n"
         "s1 = 5\n"
         "s2 = 5\n"
         "norm_w1 = 1\n"
         "delta = 0\n"
         "w_mode = \"equal\"\n"
         "norm_q1 = " + format_double(norm_q1) + "\n"
         "norm_q2 = 1\n"
         "sigma1 = " + format_double(sigma1) + "\n"
         "sigma2 = 0.2\n"
         "\n"
         "[learner]\n"
         "p = 5\n"
         "p1 = 10\n"
         "p2 = 20\n"
         "n1 = 100\n"
         "n2 = 50\n"
         "\n"
         "[experiment]\n"
         "method = \"" + method + "\"\n"
         "quantity = \"model_error\"\n"
         "replicates = 100\n"
         "seed = 1\n"
         "\n"
         "[sweep]\n"
         "variable = \"p1\"\n"
         "grid = \"10:10:200\"\n";
}

std::string fig1b_config(double sigma1, double sigma2, double norm_q2,
                         const std::string& method) {
  return std::string() +
         "# Model error against p2; ||w1|| = ||q1|| = 1, w1 = w2,\n"
         "# s = s1 = s2 = 5, n1 = 100, n2 = 50, 100 runs per point.\n"
         "[ground_truth]\n"
         "s = 5\n"
         "s1 = 5\n"
         "s2 = 5\n"
         "norm_w1 = 1\n"
         "delta = 0\n"
         "w_mode = \"equal\"\n"
         "norm_q1 = 1\n"
         "norm_q2 = " + format_double(norm_q2) + "\n"
         "sigma1 = " + format_double(sigma1) + "\n"
         "sigma2 = " + format_double(sigma2) + "\n"
         "\n"
         "[learner]\n"
         "p = 5\n"
         "p1 = 20\n"
         "p2 = 10\n"
         "n1 = 100\n"
         "n2 = 50\n"
         "\n"
         "[experiment]\n"
         "method = \"" + method + "\"\n"
         "quantity = \"model_error\"\n"
         "replicates = 100\n"
         "seed = 2\n"
         "\n"
         "[sweep]\n"
         "variable = \"p2\"\n"
         "grid = \"10,20,30,40,50,60,70,80,90,100,120,140,160,180,200,400,1000,2000\"\n";
}

std::string fig1c_config(const std::string& method) {
  return std::string() +
         "# Model error against p in the overparameterized regime;\n"
         "# sigma1 = 1, sigma2 = 0.2, ||q1|| = ||q2|| = ||w1|| = 0.1, w1 = w2,\n"
         "# s = s1 = s2 = 5, n1 = 100, n2 = 50, 100 runs per point.\n"
         "[ground_truth]\n"
         "s = 5\n"
         "s1 = 5\n"
         "s2 = 5\n"
         "norm_w1 = 0.1\n"
         "delta = 0\n"
         "w_mode = \"equal\"\n"
         "norm_q1 = 0.1\n"
         "norm_q2 = 0.1\n"
         "sigma1 = 1\n"
         "sigma2 = 0.2\n"
         "\n"
         "[learner]\n"
         "p = 5\n"
         "p1 = 120\n"
         "p2 = 55\n"
         "n1 = 100\n"
         "n2 = 50\n"
         "\n"
         "[experiment]\n"
         "method = \"" + method + "\"\n"
         "quantity = \"model_error\"\n"
         "replicates = 100\n"
         "seed = 3\n"
         "\n"
         "[sweep]\n"
         "variable = \"p\"\n"
         "grid = \"5,10,15,20,30,40,48,60,80,100,120,150,200,300,400\"\n";
}

std::string tightness_config(const std::string& w_mode, double delta, double norm_q1) {
  return std::string() +
         "# Noiseless transferring error against p in the overparameterized\n"
         "# regime; n1 = 100, ||w1|| = 1, p1 = 20, 20 runs per point.\n"
         "[ground_truth]\n"
         "s = 5\n"
         "s1 = 5\n"
         "s2 = 5\n"
         "norm_w1 = 1\n"
         "delta = " + format_double(delta) + "\n"
         "w_mode = \"" + w_mode + "\"\n"
         "norm_q1 = " + format_double(norm_q1) + "\n"
         "norm_q2 = 0\n"
         "sigma1 = 0\n"
         "sigma2 = 0\n"
         "\n"
         "[learner]\n"
         "p = 105\n"
         "p1 = 20\n"
         "p2 = 20\n"
         "n1 = 100\n"
         "n2 = 50\n"
         "\n"
         "[experiment]\n"
         "method = \"option_a\"\n"
         "quantity = \"transfer_error\"\n"
         "replicates = 20\n"
         "seed = 4\n"
         "\n"
         "[sweep]\n"
         "variable = \"p\"\n"
         "grid = \"105,110,120,135,150,175,200,250,300,400\"\n";
}

}  // namespace

std::vector<std::string> figure_names() { return {"fig1a", "fig1b", "fig1c", "tightness"}; }

std::vector<Preset> figure_presets(const std::string& figure) {
  std::vector<Preset> out;
  if (figure == "fig1a") {
    const std::pair<double, double> cases[] = {{0.1, 1.0}, {3.0, 1.0}, {0.1, 5.0}, {3.0, 5.0}};
    const char* tags[] = {"s01_q1", "s3_q1", "s01_q5", "s3_q5"};
    for (int i = 0; i < 4; ++i)
      for (const std::string method : {"option_a", "option_b"}) {
        out.push_back({"fig1a_" + std::string(tags[i]) + (method == "option_a" ? "_a" : "_b"),
                       fig1a_config(cases[i].first, cases[i].second, method)});
      }
    return out;
  }
  if (figure == "fig1b") {
    struct Case {
      const char* tag;
      double sigma1, sigma2, norm_q2;
    };
    const Case cases[] = {
        {"plus", 0.1, 0.2, 1.0},   // small noise everywhere: descent floors
        {"nabla", 0.1, 2.0, 1.0},  // large target noise: benign overfitting
        {"times", 3.0, 0.2, 1.0},  // large source noise: small knowledge transfer
        {"tri", 0.1, 0.2, 0.1},    // small target-specific truth
    };
    for (const Case& c : cases)
      for (const std::string method : {"option_a", "option_b"}) {
        out.push_back({"fig1b_" + std::string(c.tag) + (method == "option_a" ? "_a" : "_b"),
                       fig1b_config(c.sigma1, c.sigma2, c.norm_q2, method)});
      }
    return out;
  }
  if (figure == "fig1c") {
    out.push_back({"fig1c_a", fig1c_config("option_a")});
    out.push_back({"fig1c_b", fig1c_config("option_b")});
    return out;
  }
  if (figure == "tightness") {
    out.push_back({"tightness_eq_q1", tightness_config("equal", 0.0, 1.0)});
    out.push_back({"tightness_op_q1", tightness_config("opposite", 2.0, 1.0)});
    out.push_back({"tightness_eq_q5", tightness_config("equal", 0.0, 5.0)});
    out.push_back({"tightness_op_q5", tightness_config("opposite", 2.0, 5.0)});
    return out;
  }
  throw ConfigError("unknown figure '" + figure + "' (expected fig1a, fig1b, fig1c, tightness)");
}

}  // namespace translin
