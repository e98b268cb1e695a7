#include <string>

#include "doctest.h"
#include "tsclean/errors.hpp"
#include "tsclean/model_io.hpp"

using namespace tsclean;

TEST_CASE("model documents round-trip bit-exactly") {
    ArimaModel model(2, 1, 3, {0.53125, -0.217}, {0.6, -0.12, 0.034}, 357.2467890123,
                     41.93359375, 1234.5678, 1000);
    const std::string doc = write_model(model);
    ArimaModel back = read_model_string(doc);

    CHECK(back.p() == model.p());
    CHECK(back.d() == model.d());
    CHECK(back.q() == model.q());
    CHECK(back.mean() == model.mean());
    CHECK(back.sigma2() == model.sigma2());
    CHECK(back.aic() == model.aic());
    CHECK(back.n_train() == model.n_train());
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.phi()[i] == model.phi()[i]);
    for (std::size_t j = 0; j < 3; ++j) CHECK(back.theta()[j] == model.theta()[j]);

    // Writing the parsed model reproduces the document byte for byte.
    CHECK(write_model(back) == doc);
}

TEST_CASE("model document fields are laid out as documented") {
    ArimaModel model(1, 0, 1, {0.5}, {0.25}, 10.0, 2.0, 99.5, 500);
    const std::string doc = write_model(model);
    CHECK(doc.find("format tsclean-arima\n") == 0);
    CHECK(doc.find("version 1\n") != std::string::npos);
    CHECK(doc.find("p 1\n") != std::string::npos);
    CHECK(doc.find("d 0\n") != std::string::npos);
    CHECK(doc.find("q 1\n") != std::string::npos);
    CHECK(doc.find("mean 10\n") != std::string::npos);
    CHECK(doc.find("sigma2 2\n") != std::string::npos);
    CHECK(doc.find("n_train 500\n") != std::string::npos);
    CHECK(doc.find("phi_1 0.5\n") != std::string::npos);
    CHECK(doc.find("theta_1 0.25\n") != std::string::npos);
}

TEST_CASE("model parser rejects malformed documents") {
    ArimaModel model(1, 0, 0, {0.5}, {}, 0.0, 1.0, 0.0, 100);
    const std::string doc = write_model(model);

    CHECK_THROWS_AS(read_model_string(doc + "mystery 1\n"), FormatError);
    CHECK_THROWS_AS(read_model_string("format tsclean-arima\nversion 2\n"), FormatError);
    CHECK_THROWS_AS(read_model_string("format other\nversion 1\n"), FormatError);
    CHECK_THROWS_AS(read_model_string(""), FormatError);

    std::string missing_phi = doc;
    missing_phi.erase(missing_phi.find("phi_1"));
    CHECK_THROWS_AS(read_model_string(missing_phi), FormatError);

    std::string bad_number = doc;
    bad_number.replace(bad_number.find("sigma2 1"), 8, "sigma2 x");
    CHECK_THROWS_AS(read_model_string(bad_number), FormatError);

    // A document whose parameters violate the model invariants.
    std::string unstable = doc;
    unstable.replace(unstable.find("phi_1 0.5"), 9, "phi_1 1.5");
    CHECK_THROWS_AS(read_model_string(unstable), FormatError);

    CHECK_THROWS_AS(read_model_file("/nonexistent/path/model.txt"), DataError);
}
