#include <ap_int.h>

void top_module(ap_uint<2> sel, ap_uint<4> a, ap_uint<4> b, ap_uint<4> c, ap_uint<4> d, ap_uint<4>& out) {
    switch (sel) {
    case 0:
        out = a;
        break;
    case 1:
        out = b;
        break;
    case 2:
        out = c;
        break;
    default:
        out = d;
        break;
    }
}
