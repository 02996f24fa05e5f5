#include "embedfield/guest_sources.hpp"

namespace embedfield::guest {

const std::string_view kViewPreamble = R"PY(
import ctypes as _embedfield_ctypes
import numpy as _embedfield_np


def _embedfield_view(address, shape, writable=True):
    n, c = shape
    dims = (n,) if c == 1 else (n, c)
    if n * c == 0:
        view = _embedfield_np.zeros(dims)
    else:
        pointer = _embedfield_ctypes.cast(address, _embedfield_ctypes.POINTER(_embedfield_ctypes.c_double))
        view = _embedfield_np.ctypeslib.as_array(pointer, shape=dims)
    view.flags.writeable = writable
    return view
)PY";

const std::string_view kAnalyticLaw = R"PY(
import numpy as np


def stiffness():
    c = np.zeros((6, 6))
    c[:3, :3] = lame_1
    c[np.arange(6), np.arange(6)] += 2.0 * lame_2
    return c


def predict(strain_tensor):
    return strain_tensor.dot(stiffness())


def predict_into(strain_tensor, stress):
    np.matmul(strain_tensor, stiffness(), out=stress)
)PY";

const std::string_view kArrayNnLaw = R"PY(
import json
import numpy as np


def load_weights(path):
    global w0, b0, w1, b1, x_min, x_max, y_min, y_max
    with open(path) as f:
        bundle = json.load(f)
    w0 = np.array(bundle["w0"], dtype=np.float64)
    b0 = np.array(bundle["b0"], dtype=np.float64)
    w1 = np.array(bundle["w1"], dtype=np.float64)
    b1 = np.array(bundle["b1"], dtype=np.float64)
    x_min = np.array(bundle["x_scaler"]["min"], dtype=np.float64)
    x_max = np.array(bundle["x_scaler"]["max"], dtype=np.float64)
    y_min = np.array(bundle["y_scaler"]["min"], dtype=np.float64)
    y_max = np.array(bundle["y_scaler"]["max"], dtype=np.float64)
    if w0.shape != (6, 20) or b0.shape != (20,) or w1.shape != (20, 6) or b1.shape != (6,):
        raise ValueError("weight bundle must describe a 6-20-6 network")


def neural_prediction(x, w0, w1, b0, b1):
    l0 = x.dot(w0) + b0
    l0 = np.maximum(0, l0)
    l1 = l0.dot(w1) + b1
    return l1


def predict(x):
    x = (x - x_min) / (x_max - x_min)
    prediction_output_scaled = neural_prediction(x, w0, w1, b0, b1)
    return prediction_output_scaled * (y_max - y_min) + y_min


def predict_into(strain, stress):
    stress[...] = predict(strain)
)PY";

const std::string_view kHeatStep = R"PY(
import numpy as np


def calculate(T, gamma):
    N = T.shape[0]
    Nx = np.sqrt(N).astype(int)
    Ny = Nx
    if Nx * Ny != N:
        raise ValueError("calculate: %d cells do not form a square grid" % N)

    for i in range(1, Nx - 1):
        for j in range(1, Ny - 1):
            T[i*Ny + j] = \
                gamma*(T[i*Ny + j + 1] + T[i*Ny + j - 1]
                       + T[(i + 1)*Ny + j] + T[(i - 1)*Ny + j]
                       - 4*T[i*Ny + j]) + T[i*Ny + j]

    return T
)PY";

const std::string_view kWallProfile = R"PY(
import numpy as np


def calculate(face_centres, time):
    result = np.zeros(shape=face_centres.shape)
    x = face_centres[:, 0]
    result[:, 0] = np.sin(np.pi*time)*np.sin(40*np.pi*x)
    return result
)PY";

}  // namespace embedfield::guest
