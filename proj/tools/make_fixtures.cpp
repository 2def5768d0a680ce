// Regenerates the JSON fixture files under fixtures/ from the built-in
// constructions. Run from the repository root: ./make_fixtures [dir]
#include <iostream>
#include <string>

#include "stc/fixtures.hpp"
#include "stc/json_io.hpp"

using namespace stc;

int main(int argc, char** argv) {
  std::string dir = argc > 1 ? argv[1] : "fixtures";

  {
    Json j;
    j["polynomial"] = poly_json(clifford_quartic());
    j["munzner"] = Json{{"g", 4}, {"m1", 1}, {"m2", 2}};
    write_text_file(dir + "/clifford.json", j.dump(2) + "\n");
  }
  {
    Json j;
    j["kind"] = "lie-group";
    j["dim"] = 8;
    j["algebra"] = "su3";
    j["polynomial"] = "cubic";
    write_text_file(dir + "/su3.json", j.dump(2) + "\n");
  }
  {
    Json j;
    j["kind"] = "lie-group";
    j["dim"] = 3;
    j["algebra"] = "su2";
    j["polynomial"] = "energy";
    write_text_file(dir + "/su2.json", j.dump(2) + "\n");
  }
  {
    Json j;
    j["kind"] = "lie-group";
    j["dim"] = 8;
    j["algebra"] = "su3";
    j["polynomial"] = "energy";
    write_text_file(dir + "/su3-energy.json", j.dump(2) + "\n");
  }
  {
    // round sphere chart with no coupled tensor: R = -(h ^ h), kappa = n(n-1)
    Json j;
    j["kind"] = "chart";
    j["dim"] = 3;
    j["chart"] = "sphere";
    j["c"] = 1.0;
    j["kappa"] = 6.0;
    write_text_file(dir + "/sphere-chart.json", j.dump(2) + "\n");
  }
  {
    Json j;
    j["kind"] = "hypersurface";
    j["dim"] = 2;
    j["immersion"] = "clifford-torus";
    write_text_file(dir + "/clifford-torus.json", j.dump(2) + "\n");
  }
  {
    Json j;
    j["kind"] = "hypersurface";
    j["dim"] = 3;
    j["immersion"] = "sphere-circle";
    write_text_file(dir + "/sphere-circle.json", j.dump(2) + "\n");
  }
  std::cout << "fixtures written to " << dir << "\n";
  return 0;
}
