class Counter {
public:
    int value;
    long next() {
        value = value + 1;
        return value;
    }
};
