#include <ap_int.h>

void top_module(bool d, bool enable, ap_uint<8>& q) {
    static ap_uint<8> r = 0;
    if (enable) {
        r = (r << 1) | d;
    }
    q = r;
}
