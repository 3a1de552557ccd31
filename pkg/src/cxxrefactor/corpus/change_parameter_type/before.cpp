class Scaler {
public:
    double scale(int value, double factor) {
        return value * factor;
    }
};
