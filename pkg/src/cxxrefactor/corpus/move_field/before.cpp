class Engine {
public:
    int power;
    int wheels;
};
class Car {
public:
    int seats;
};
