class Engine {
public:
    int power;
};
class Car {
public:
    int seats;
    int wheels;
};
