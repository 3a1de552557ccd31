class Sensor {
public:
    double reading;
    int id;
};
