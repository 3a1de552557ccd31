class Scaler {
public:
    double scale(long value, double factor) {
        return value * factor;
    }
};
