class Vehicle {
public:
    int speed;
    int axles;
};
class Truck : public Vehicle {
public:
    int load;
};
