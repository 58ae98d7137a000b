#include "common.hpp"

#include "porohom/common/error.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"porohom: two-scale homogenization of porous beam networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "porohom 0.1.0");

  porohom::cli::register_rve(app);
  porohom::cli::register_micro(app);
  porohom::cli::register_mesh(app);
  porohom::cli::register_data(app);
  porohom::cli::register_nn(app);
  porohom::cli::register_fe2(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const porohom::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
