#include "mor/detector/runtime.hpp"

#include <cstdlib>
#include <string>

#include "mor/error.hpp"

namespace mor::detector {

torch::Device device_from_env() {
  const char* env = std::getenv("MOR_DEVICE");
  const std::string name = env ? env : "cpu";
  try {
    torch::Device device(name);
    if (device.is_cuda() && !torch::cuda::is_available()) {
      throw ConfigError("MOR_DEVICE=" + name + " but CUDA is unavailable");
    }
    return device;
  } catch (const c10::Error&) {
    throw ConfigError("invalid MOR_DEVICE value '" + name + "'");
  }
}

void enable_determinism(std::uint64_t seed) {
  torch::manual_seed(seed);
  torch::set_num_threads(1);
  at::globalContext().setDeterministicAlgorithms(true, /*warn_only=*/false);
}

torch::Tensor mat_to_tensor(const cv::Mat& hwc) {
  if (hwc.depth() != CV_32F) throw ShapeError("expected a CV_32F matrix");
  cv::Mat contiguous = hwc.isContinuous() ? hwc : hwc.clone();
  auto t = torch::from_blob(contiguous.data, {contiguous.rows, contiguous.cols, contiguous.channels()},
                            torch::kFloat32);
  return t.permute({2, 0, 1}).unsqueeze(0).clone();
}

}  // namespace mor::detector
